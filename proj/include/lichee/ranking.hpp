#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lichee/network.hpp"
#include "lichee/search.hpp"

namespace lichee {

/// Per-node, per-sample centroid deviations making every children-sum
/// constraint of a tree hold exactly.
struct QpSolution {
    bool feasible = false;
    double objective = 0.0;
    std::vector<std::vector<double>> deviations;  // [node position][sample]
    double kkt_residual = 0.0;

    bool operator==(const QpSolution&) const = default;
};

struct RankedTree {
    CandidateTree tree;
    double local_score = 0.0;
    std::optional<QpSolution> qp;
    int rank = 0;
};

struct Lineage {
    std::vector<int> path;  // node positions, root first
    double prevalence = 0.0;

    bool operator==(const Lineage&) const = default;
};

struct SampleDecomposition {
    std::size_t sample = 0;
    std::vector<Lineage> lineages;

    bool operator==(const SampleDecomposition&) const = default;
};

/// Sum over nodes and samples of the squared amount by which a node's
/// children exceed it.
double local_score(const ConstraintNetwork& net, const CandidateTree& tree);

/// Smallest sum of squared deviations e (|e| <= eps, e <= centroid) such
/// that adjusted children sums never exceed the adjusted parent. Entries at
/// samples where a node is absent stay fixed at zero.
QpSolution solve_qp(const ConstraintNetwork& net, const CandidateTree& tree, double eps);

/// Orders trees by local score, solves the QP for the best `k` (and further
/// batches of `k` while none is feasible), drops infeasible ones and ranks
/// QP-scored trees ahead of the rest.
std::vector<RankedTree> rank_trees(const ConstraintNetwork& net, std::vector<CandidateTree> trees, double eps,
                                   std::size_t k = 5);

/// Lineages of one sample: a root-to-node path for every present node that
/// has no present child or keeps a positive share of the sample after its
/// present children are subtracted. Uses QP-adjusted centroids when the
/// tree carries a feasible solution.
SampleDecomposition decompose_sample(const ConstraintNetwork& net, const RankedTree& tree, std::size_t sample);

}  // namespace lichee
