#include "lichee/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lichee {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-12;
constexpr double kTiny = 1e-14;

double kkt_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda) {
    double res = 0.0;
    const Eigen::VectorXd slack = A * x - b;
    for (Eigen::Index j = 0; j < slack.size(); ++j) {
        res = std::max(res, -slack[j]);
        res = std::max(res, -lambda[j]);
        res = std::max(res, std::abs(lambda[j] * slack[j]));
    }
    const Eigen::VectorXd grad = x - A.transpose() * lambda;
    if (grad.size() > 0) res = std::max(res, grad.cwiseAbs().maxCoeff());
    return res;
}

}  // namespace

MinNormResult solve_min_norm(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != b.size()) throw std::invalid_argument("solve_min_norm: dimension mismatch");
    const Eigen::Index n = A.cols();
    const Eigen::Index m = A.rows();

    MinNormResult out;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<Eigen::Index> active;
    std::vector<double> u;
    std::vector<char> is_active(static_cast<std::size_t>(m), 0);

    const int cap = static_cast<int>(50 * (m + n) + 100);
    int steps = 0;

    auto drop = [&](std::size_t k) {
        is_active[static_cast<std::size_t>(active[k])] = 0;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
        u.erase(u.begin() + static_cast<std::ptrdiff_t>(k));
    };

    while (true) {
        // Most violated inactive constraint.
        Eigen::Index p = -1;
        double worst = -kFeasTol;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (is_active[static_cast<std::size_t>(j)]) continue;
            const double s = A.row(j).dot(x) - b[j];
            if (s < worst) {
                worst = s;
                p = j;
            }
        }
        if (p < 0) break;

        const Eigen::VectorXd np = A.row(p).transpose();
        double u_plus = 0.0;
        while (true) {
            if (++steps > cap) throw std::runtime_error("solve_min_norm: iteration limit exceeded");
            const std::size_t q = active.size();
            Eigen::VectorXd z = np;
            Eigen::VectorXd r;
            if (q > 0) {
                Eigen::MatrixXd N(n, static_cast<Eigen::Index>(q));
                for (std::size_t k = 0; k < q; ++k) N.col(static_cast<Eigen::Index>(k)) = A.row(active[k]).transpose();
                r = N.colPivHouseholderQr().solve(np);
                z = np - N * r;
            }

            double t1 = kInf;
            std::size_t k_drop = 0;
            for (std::size_t k = 0; k < q; ++k) {
                if (r[static_cast<Eigen::Index>(k)] > kTiny) {
                    const double ratio = u[k] / r[static_cast<Eigen::Index>(k)];
                    if (ratio < t1) {
                        t1 = ratio;
                        k_drop = k;
                    }
                }
            }
            const double zz = z.squaredNorm();
            const double sp = np.dot(x) - b[p];
            const double t2 = zz > kTiny * std::max(1.0, np.squaredNorm()) ? -sp / zz : kInf;

            if (t1 == kInf && t2 == kInf) {
                out.feasible = false;
                out.x = x;
                out.multipliers = Eigen::VectorXd::Zero(m);
                out.iterations = steps;
                return out;
            }
            if (t2 == kInf) {
                for (std::size_t k = 0; k < q; ++k) u[k] -= t1 * r[static_cast<Eigen::Index>(k)];
                u_plus += t1;
                drop(k_drop);
                continue;
            }
            const double t = std::min(t1, t2);
            x += t * z;
            for (std::size_t k = 0; k < q; ++k) u[k] -= t * r[static_cast<Eigen::Index>(k)];
            u_plus += t;
            if (t2 <= t1) {
                active.push_back(p);
                u.push_back(u_plus);
                is_active[static_cast<std::size_t>(p)] = 1;
                break;
            }
            drop(k_drop);
        }
    }

    out.feasible = true;
    out.x = x;
    out.multipliers = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < active.size(); ++k) out.multipliers[active[k]] = std::max(0.0, u[k]);
    out.iterations = steps;
    out.kkt_residual = kkt_residual(A, b, x, out.multipliers);
    return out;
}

}  // namespace lichee
