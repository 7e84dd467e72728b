#pragma once

#include <Eigen/Dense>

namespace lichee {

/// Result of a minimum-norm projection onto {x : A x >= b}.
struct MinNormResult {
    bool feasible = false;
    Eigen::VectorXd x;
    Eigen::VectorXd multipliers;  // one per row of A, zero when inactive
    int iterations = 0;
    /// max of primal infeasibility, stationarity and complementarity errors
    double kkt_residual = 0.0;
};

/// Minimizes 0.5 |x|^2 subject to A x >= b with the Goldfarb-Idnani dual
/// active-set method. Infeasibility is reported, not thrown. Intended for
/// small dense problems.
MinNormResult solve_min_norm(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace lichee
