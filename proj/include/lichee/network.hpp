#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lichee/core.hpp"

namespace lichee {

struct NetworkConfig {
    /// Lower bound on the per-sample VAF margin between parent and child.
    double epsilon_edge = 0.1;
    /// VAF assigned to the germline root in every sample.
    double root_vaf = 0.5;
    bool constrain_private = true;
    /// Offer the root as a parent to every node, not only parentless ones.
    bool root_to_all = false;
    /// Clusters with fewer SNVs are not turned into nodes.
    std::size_t min_node_support = 2;

    void validate() const;
};

/// A network node: the germline root or one SNV cluster.
struct NetworkNode {
    int id = 0;
    bool is_root = false;
    Cluster cluster;  // root: all-ones profile, no members
    std::size_t level = 0;
    std::vector<double> full_centroid;
    std::vector<double> full_stderr;

    const BinaryProfile& profile() const { return cluster.profile; }
    std::size_t size() const { return cluster.members.size(); }
    bool present(std::size_t sample) const { return cluster.profile[sample]; }

    static NetworkNode root(std::size_t samples, double root_vaf);
    static NetworkNode from_cluster(const Cluster& c);

    bool operator==(const NetworkNode&) const = default;
};

/// Edge endpoints are node positions in ConstraintNetwork::nodes.
struct Edge {
    int parent = 0;
    int child = 0;

    auto operator<=>(const Edge&) const = default;
};

struct ConstraintNetwork {
    std::vector<NetworkNode> nodes;  // nodes[0] is the root
    std::vector<Edge> edges;         // sorted
    std::size_t samples = 0;

    static constexpr int kRoot = 0;

    std::size_t size() const { return nodes.size(); }
    std::vector<std::vector<int>> parents() const;
    std::vector<std::vector<int>> children() const;
    bool has_edge(int parent, int child) const;
    /// Position of the node with the given id, or -1.
    int index_of(int id) const;

    bool operator==(const ConstraintNetwork&) const = default;
};

double edge_margin(const NetworkNode& u, const NetworkNode& v, std::size_t sample, const NetworkConfig& cfg);

/// Per-sample ordering test: u may precede v when u's centroid is at least
/// v's minus the margin and v is absent wherever u is.
bool admits_edge(const NetworkNode& u, const NetworkNode& v, const NetworkConfig& cfg);

/// Sum of squared excesses of `child` over `parent`.
double vaf_error(const NetworkNode& parent, const NetworkNode& child);

/// Orientation for two same-profile nodes: the direction with the smaller
/// VAF error, ties to the lower id as parent. Returns (parent, child).
std::pair<const NetworkNode*, const NetworkNode*> orient_same_level(const NetworkNode& u, const NetworkNode& v);

/// Drops clusters below `min_node_support`. Returns the kept clusters and
/// fills `removed` with the others.
std::vector<Cluster> filter_by_support(const std::vector<Cluster>& clusters, const NetworkConfig& cfg,
                                       std::vector<Cluster>* removed = nullptr);

/// Builds the constraint DAG over the clusters plus a germline root.
ConstraintNetwork build_network(const std::vector<Cluster>& clusters, std::size_t samples,
                                const NetworkConfig& cfg);

struct Adjustment {
    ConstraintNetwork network;
    Cluster removed;
};

/// Removes the smallest non-robust node (ties: lowest level, lowest id) and
/// rebuilds the edges; nullopt when no non-robust node is left.
std::optional<Adjustment> adjust_network(const ConstraintNetwork& net, const NetworkConfig& cfg);

bool is_acyclic(const ConstraintNetwork& net);

}  // namespace lichee
