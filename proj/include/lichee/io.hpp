#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lichee/bundle.hpp"
#include "lichee/core.hpp"
#include "lichee/simulator.hpp"

namespace lichee {

/// Malformed input; `what()` names the source and line.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SnvTable {
    SampleSet samples;
    std::vector<SnvRecord> snvs;
};

/// Reads the tab-separated SSNV table:
///   #chr  position  description  <sample_1> ... <sample_S>
/// followed by one row per SSNV with S fractions in [0,1]. In CP mode the
/// values are halved on input. `normal_index` selects the control column.
SnvTable read_snv_table(std::istream& in, bool cp = false, std::size_t normal_index = 0,
                        const std::string& source = "<input>");
SnvTable parse_snv_table(const std::filesystem::path& path, bool cp = false, std::size_t normal_index = 0);
void write_snv_table(std::ostream& out, const SnvTable& table);

/// Reads pre-computed clusters, one per line:
///   profile  centroid,csv  row-indices,csv
/// The centroid lists one value per present sample. Cluster ids are
/// assigned 1.. in file order; standard errors come from the member VAFs.
std::vector<Cluster> read_cluster_file(std::istream& in, const SnvTable& table,
                                       const std::string& source = "<clusters>");
std::vector<Cluster> parse_cluster_file(const std::filesystem::path& path, const SnvTable& table);
void write_cluster_file(std::ostream& out, const std::vector<Cluster>& clusters);

/// Graphviz digraph of one ranked tree, with sample leaves attached to the
/// end of each of their lineages.
std::string tree_to_dot(const ResultBundle& bundle, std::size_t tree_index = 0);

/// Human-readable run summary: tree count, top score, truncation.
std::string summary_text(const ResultBundle& bundle);

struct OutputPaths {
    std::filesystem::path json;
    std::filesystem::path dot;
    std::filesystem::path summary;
};

/// Writes whichever of the paths are non-empty. Throws std::runtime_error
/// naming the path on failure.
void write_outputs(const ResultBundle& bundle, const OutputPaths& paths);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Ground-truth file of a simulated dataset (tab-separated sections).
void write_truth(std::ostream& out, const SimulationTruth& truth);
SimulationTruth read_truth(std::istream& in, const std::string& source = "<truth>");

}  // namespace lichee
