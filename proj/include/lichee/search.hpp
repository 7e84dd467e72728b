#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lichee/network.hpp"

namespace lichee {

struct SearchConfig {
    /// Slack allowed when children's centroids sum past their parent's.
    double epsilon_tree = 0.1;
    std::size_t max_trees = 100000;
    std::uint64_t max_grow_calls = 100000000;

    void validate() const;
};

/// Spanning arborescence over a network's nodes, as a parent array indexed
/// by node position (root entry is -1).
struct CandidateTree {
    std::vector<int> parent;

    std::vector<Edge> edges() const;
    std::vector<std::vector<int>> children() const;

    auto operator<=>(const CandidateTree&) const = default;
};

struct SearchResult {
    std::vector<CandidateTree> trees;
    bool truncated = false;
    std::uint64_t grow_calls = 0;
};

/// Children-sum check at `u`: for every sample the centroids of u's
/// children (per `children`) sum to at most u's centroid plus epsilon.
bool local_sum_ok(const ConstraintNetwork& net, const std::vector<std::vector<int>>& children, int u,
                  const SearchConfig& cfg);

/// True iff local_sum_ok holds at every node of the tree.
bool tree_sum_ok(const ConstraintNetwork& net, const CandidateTree& tree, const SearchConfig& cfg);

/// Enumerates every spanning tree of `net` satisfying the children-sum
/// check at each node, by Gabow-Myers backtracking with the check applied
/// on each edge addition.
SearchResult enumerate_trees(const ConstraintNetwork& net, const SearchConfig& cfg);

}  // namespace lichee
