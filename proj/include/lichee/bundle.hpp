#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lichee/calling.hpp"
#include "lichee/core.hpp"

namespace lichee {

inline constexpr const char* kBundleFormat = "lichee-bundle";
inline constexpr int kBundleVersion = 1;

struct BundleSnv {
    SnvRecord record;
    std::optional<BinaryProfile> profile;  // called profile; empty if dropped while calling
    std::optional<int> node;               // node id, when the SSNV reached the network

    bool operator==(const BundleSnv&) const = default;
};

struct BundleNode {
    int id = 0;
    bool root = false;
    BinaryProfile profile;
    std::size_t level = 0;
    bool robust = true;
    std::vector<std::size_t> snvs;  // rows of the SSNV table
    std::vector<double> centroid;   // one entry per sample
    std::vector<double> stderr_;    // one entry per sample

    bool operator==(const BundleNode&) const = default;
};

struct BundleEdge {
    int parent = 0;  // node ids
    int child = 0;

    auto operator<=>(const BundleEdge&) const = default;
};

struct BundleLineage {
    std::vector<int> path;  // node ids, root first
    double prevalence = 0.0;

    bool operator==(const BundleLineage&) const = default;
};

struct BundleDecomposition {
    std::size_t sample = 0;
    std::vector<BundleLineage> lineages;

    bool operator==(const BundleDecomposition&) const = default;
};

struct BundleTree {
    int rank = 0;
    double local_score = 0.0;
    std::optional<double> qp_objective;
    std::vector<BundleEdge> edges;
    /// QP deviations per node (in `ResultBundle::nodes` order) and sample.
    std::vector<std::vector<double>> deviations;
    std::vector<BundleDecomposition> decompositions;

    bool operator==(const BundleTree&) const = default;
};

struct RemovedNode {
    int id = 0;
    std::vector<std::size_t> snvs;

    bool operator==(const RemovedNode&) const = default;
};

struct ResultBundle {
    int version = kBundleVersion;
    nlohmann::json config;  // echo of the run configuration
    std::optional<std::string> timestamp;
    SampleSet samples;
    std::vector<BundleSnv> snvs;
    std::vector<DroppedSnv> dropped;
    std::vector<BundleNode> nodes;  // root first
    std::vector<BundleEdge> network_edges;
    std::size_t trees_found = 0;
    std::size_t trees_valid = 0;
    bool truncated = false;
    std::uint64_t grow_calls = 0;
    std::vector<RemovedNode> adjustments;  // nodes removed to obtain a valid tree
    std::vector<BundleTree> trees;
    std::string diagnostic;

    /// Position of node `id` in `nodes`, or -1.
    int node_index(int id) const;

    bool operator==(const ResultBundle&) const = default;
};

nlohmann::json to_json(const ResultBundle& bundle);
/// Throws std::invalid_argument on a malformed document.
ResultBundle bundle_from_json(const nlohmann::json& doc);

/// Serialized form used for files: two-space indented, trailing newline.
std::string dump_bundle(const ResultBundle& bundle);
ResultBundle parse_bundle(const std::string& text);

}  // namespace lichee
