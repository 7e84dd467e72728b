#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lichee/core.hpp"
#include "lichee/network.hpp"
#include "lichee/random.hpp"
#include "lichee/search.hpp"

namespace gen {

using lichee::Engine;

inline double uniform(Engine& rng, double lo, double hi) { return lo + (hi - lo) * lichee::uniform01(rng); }

inline std::size_t index(Engine& rng, std::size_t n) { return static_cast<std::size_t>(lichee::uniform_index(rng, n)); }

inline lichee::BinaryProfile random_profile(Engine& rng, std::size_t n) {
    lichee::BinaryProfile p(n);
    for (std::size_t i = 0; i < n; ++i) p.set(i, lichee::bernoulli(rng, 0.5));
    return p;
}

inline lichee::TernaryProfile random_ternary(Engine& rng, std::size_t n, double star_p = 0.3) {
    std::vector<lichee::Mark> marks(n);
    for (auto& m : marks) {
        if (lichee::bernoulli(rng, star_p)) m = lichee::Mark::Unknown;
        else m = lichee::bernoulli(rng, 0.5) ? lichee::Mark::Present : lichee::Mark::Absent;
    }
    return lichee::TernaryProfile(marks);
}

// A node whose every sample is present, centroid as given.
inline lichee::NetworkNode plain_node(int id, std::size_t level, const std::vector<double>& centroid) {
    lichee::NetworkNode n;
    n.id = id;
    n.is_root = id == 0;
    n.cluster.id = id;
    n.cluster.profile = lichee::BinaryProfile::all_ones(centroid.size());
    n.cluster.centroid = centroid;
    n.cluster.standard_error.assign(centroid.size(), 0.0);
    if (!n.is_root) n.cluster.members = {static_cast<std::size_t>(id)};
    n.level = level;
    n.full_centroid = centroid;
    n.full_stderr.assign(centroid.size(), 0.0);
    return n;
}

// Random rooted DAG: node 0 is the root, edges go from lower to higher
// positions, every non-root node has at least one parent.
inline lichee::ConstraintNetwork random_dag(Engine& rng, std::size_t max_nodes = 8, std::size_t max_edges = 16,
                                            std::size_t samples = 2) {
    const std::size_t n = 2 + index(rng, max_nodes - 1);
    lichee::ConstraintNetwork net;
    net.samples = samples;
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<double> c(samples);
        for (auto& x : c) x = v == 0 ? 0.5 : uniform(rng, 0.0, 0.5);
        net.nodes.push_back(plain_node(static_cast<int>(v), n - v, c));
    }
    std::vector<lichee::Edge> edges;
    for (std::size_t v = 1; v < n; ++v) edges.push_back({static_cast<int>(index(rng, v)), static_cast<int>(v)});
    std::vector<lichee::Edge> extra;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) extra.push_back({static_cast<int>(u), static_cast<int>(v)});
    for (std::size_t k = extra.size(); k > 1; --k) std::swap(extra[k - 1], extra[index(rng, k)]);
    for (const auto& e : extra) {
        if (edges.size() >= max_edges) break;
        if (std::find(edges.begin(), edges.end(), e) == edges.end() && lichee::bernoulli(rng, 0.5)) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    net.edges = std::move(edges);
    return net;
}

// Random tree with nested presence profiles and centroids on a 1e-3 grid.
// Returns the network (edges = tree edges) and the parent array.
struct TreeCase {
    lichee::ConstraintNetwork net;
    lichee::CandidateTree tree;
};

inline TreeCase random_tree_case(Engine& rng, std::size_t min_nodes = 3, std::size_t max_nodes = 6,
                                 std::size_t samples = 2) {
    const std::size_t n = min_nodes + index(rng, max_nodes - min_nodes + 1);
    TreeCase tc;
    tc.net.samples = samples;
    tc.tree.parent.assign(n, -1);
    std::vector<lichee::BinaryProfile> prof(n, lichee::BinaryProfile::all_ones(samples));
    for (std::size_t v = 1; v < n; ++v) {
        const auto p = index(rng, v);
        tc.tree.parent[v] = static_cast<int>(p);
        prof[v] = prof[p];
        // occasionally drop a sample from the subtree, keeping one present
        const auto i = index(rng, samples);
        if (lichee::bernoulli(rng, 0.25) && lichee::hamming_weight(prof[v]) > 1) prof[v].set(i, false);
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<double> full(samples, 0.0), cent;
        for (std::size_t i = 0; i < samples; ++i) {
            if (!prof[v][i]) continue;
            full[i] = v == 0 ? 0.5 : static_cast<double>(1 + index(rng, 450)) / 1000.0;
            cent.push_back(full[i]);
        }
        lichee::NetworkNode node;
        node.id = static_cast<int>(v);
        node.is_root = v == 0;
        node.cluster.id = node.id;
        node.cluster.profile = prof[v];
        node.cluster.centroid = cent;
        node.cluster.standard_error.assign(cent.size(), 0.0);
        if (v != 0) node.cluster.members = {v};
        node.level = lichee::hamming_weight(prof[v]);
        node.full_centroid = full;
        node.full_stderr.assign(samples, 0.0);
        tc.net.nodes.push_back(std::move(node));
    }
    for (std::size_t v = 1; v < n; ++v) tc.net.edges.push_back({tc.tree.parent[v], static_cast<int>(v)});
    std::sort(tc.net.edges.begin(), tc.net.edges.end());
    return tc;
}

// Cluster over the given profile with one member per listed row and the
// centroid restricted to present samples.
inline lichee::Cluster make_cluster(int id, const std::string& profile, const std::vector<double>& full_centroid,
                                    std::vector<std::size_t> members, bool robust = true) {
    lichee::Cluster c;
    c.id = id;
    c.profile = lichee::BinaryProfile::parse(profile);
    for (std::size_t i = 0; i < c.profile.size(); ++i) {
        if (c.profile[i]) {
            c.centroid.push_back(full_centroid[i]);
            c.standard_error.push_back(0.0);
        }
    }
    c.members = std::move(members);
    c.robust = robust;
    return c;
}

}  // namespace gen
