#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "lichee/bundle.hpp"
#include "lichee/pipeline.hpp"
#include "lichee/simulator.hpp"

namespace lichee {

/// Percentages; pair metrics use all simulated pairs of the class as the
/// denominator except pct_ad_correct, which is over ordered pairs.
struct MetricReport {
    double pct_snvs_assigned_correctly = 0.0;
    double pct_snvs_in_tree = 0.0;
    double pct_ad_pairs = 0.0;
    double pct_ad_ordered = 0.0;
    double pct_ad_correct = 0.0;
    double pct_ad_to_sib = 0.0;
    double pct_ad_to_sib_nopriv = 0.0;
    double pct_sib_pairs = 0.0;
    double pct_sib_correct = 0.0;
    double pct_sib_to_ad = 0.0;
    double pct_sib_to_ad_nopriv = 0.0;
    std::size_t trees_reconstructed = 0;
    double simulated_snvs = 0.0;
    double pct_snvs_in_cnv = 0.0;

    bool operator==(const MetricReport&) const = default;
};

enum class PairClass { AncestorDescendant, Sibling };

struct TruePair {
    std::size_t a = 0;  // table rows, a < b
    std::size_t b = 0;
    PairClass kind = PairClass::Sibling;
    bool a_above = false;  // for AncestorDescendant: a's origin is the ancestor
};

/// Percentage of collected SSNVs whose called profile equals the true
/// presence pattern (carrier cells drawn into the sample).
double presence_sensitivity(const SimulationTruth& truth, const ResultBundle& result);

/// Every pair of collected SSNVs, classified by their origin populations.
std::vector<TruePair> pair_relationships(const SimulationTruth& truth);

enum class Placement { SameNode, FirstAbove, SecondAbove, Siblings, Missing };

/// How tree `tree_index` of the bundle places table rows a and b.
Placement reconstructed_relation(const ResultBundle& result, std::size_t tree_index, std::size_t a, std::size_t b);

/// Scores the bundle's tree against the truth. Without trees only the
/// calling sensitivity is filled in and trees_reconstructed is 0.
MetricReport compare_tree(const SimulationTruth& truth, const ResultBundle& result, std::size_t tree_index = 0);

/// Mean over reports with a reconstructed tree; sensitivity and SSNV
/// counts are averaged over all reports.
MetricReport average_reports(const std::vector<MetricReport>& reports);

struct ExperimentSpec {
    ExperimentConfig data;
    RunConfig run;
    std::size_t replicates = 100;
    std::uint64_t seed = 1;
    std::string label;
};

/// Reconstruction settings used for scoring simulated data: 0.005 calling
/// cutoffs, single-SSNV clusters and nodes allowed, root offered as a parent
/// to every node, private nodes unconstrained.
RunConfig simulation_run_config();

/// Simulates and reconstructs `replicates` independent datasets. Replicates
/// run on up to `threads` workers (0 = hardware concurrency); the result is
/// independent of the thread count.
std::vector<MetricReport> run_experiment(const ExperimentSpec& spec, unsigned threads = 0);

void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const std::string& label, const MetricReport& r);

}  // namespace lichee
