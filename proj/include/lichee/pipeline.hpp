#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lichee/bundle.hpp"
#include "lichee/calling.hpp"
#include "lichee/clustering.hpp"
#include "lichee/io.hpp"
#include "lichee/network.hpp"
#include "lichee/search.hpp"

namespace lichee {

enum class InputMode { Vaf, Cp, Clusters };

struct RunConfig {
    CallingConfig calling;
    ClusteringConfig clustering;
    NetworkConfig network;
    SearchConfig search;
    /// Bound on the per-entry centroid adjustment in the ranking QP.
    double qp_epsilon = 0.1;
    /// Trees solved per QP batch.
    std::size_t qp_batch = 5;
    /// Ranked trees kept in the bundle.
    std::size_t num_save = 5;
    InputMode mode = InputMode::Vaf;
    bool timestamp = false;

    void validate() const;
    /// Sets every VAF error margin (edge, tree sum, QP bound) to `eps`.
    void set_epsilon(double eps);
};

nlohmann::json config_to_json(const RunConfig& cfg);

/// Runs the full pipeline on a parsed table. With `clusters`, calling and
/// clustering are skipped and the given clusters become network nodes.
ResultBundle run_pipeline(const RunConfig& cfg, const SnvTable& table,
                          const std::optional<std::vector<Cluster>>& clusters = std::nullopt);

/// Checks that every input SSNV is placed in exactly one node or dropped
/// exactly once; returns an empty string or a description of the problem.
std::string check_snv_accounting(const ResultBundle& bundle);

}  // namespace lichee
