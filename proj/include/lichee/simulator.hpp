#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lichee/core.hpp"
#include "lichee/random.hpp"

namespace lichee {

enum class SizeLaw { LogUniform, Uniform };

struct SimulationConfig {
    double p_ssnv = 0.15;
    double p_cnv = 0.0;
    double p_death = 0.06;
    int iterations = 50;
    /// Population sizes are drawn on [min_population, max_population].
    SizeLaw size_law = SizeLaw::Uniform;
    double min_population = 1e2;
    double max_population = 1e6;
    /// SSNVs introduced by one SSNV event (all on the new population).
    int ssnvs_per_event = 1;
    /// Autosomes used by the genome model (1..22).
    int chromosomes = 22;
    std::uint64_t seed = 1;

    void validate() const;
};

enum class EventKind { Root, Ssnv, Cnv };

struct SimSnv {
    std::size_t id = 0;
    int origin = 0;  // population that acquired it
    int chrom = 1;
    std::int64_t pos = 0;
    int arm = 0;        // 0 = p, 1 = q
    int haplotype = 0;  // 0 or 1
};

struct CnvEvent {
    int chrom = 1;
    int arm = 0;
    int haplotype = 0;
};

struct CellPopulation {
    int id = 0;
    int parent = -1;
    double size = 0.0;
    bool alive = true;
    EventKind event = EventKind::Root;
    std::vector<std::size_t> ssnvs;  // SSNVs acquired here
    std::optional<CnvEvent> cnv;
    int born = 0;  // iteration of birth
};

/// Populations are stored by id; parents precede children.
struct LineageTree {
    std::vector<CellPopulation> populations;
    std::vector<SimSnv> snvs;

    std::vector<std::vector<int>> children() const;
    /// True when `a` is a proper ancestor of `b`.
    bool is_ancestor(int a, int b) const;
    /// Populations from the root down to `p`, inclusive.
    std::vector<int> lineage(int p) const;
    bool carries(int population, std::size_t snv) const;
};

/// Haplotype copies at one SSNV's locus in one population.
struct LocusState {
    int variant = 0;
    int reference = 2;
};

LocusState locus_state(const LineageTree& tree, int population, const SimSnv& snv);

enum class SamplingScheme { Localized, Randomized };

struct SampleDraw {
    std::vector<std::pair<int, std::uint64_t>> cells;  // (population, cell count), count > 0
    std::uint64_t normal_cells = 0;
    double normal_fraction = 0.0;
    SamplingScheme scheme = SamplingScheme::Localized;
};

struct SamplingConfig {
    std::size_t samples = 5;
    std::uint64_t cells_per_sample = 1000;
    int max_subclones = 5;
    double max_normal_fraction = 0.2;
};

LineageTree grow_tree(const SimulationConfig& cfg, Engine& rng);
LineageTree grow_tree(const SimulationConfig& cfg);

/// Roots of up to `n` disjoint subtrees, found breadth-first as high in
/// the tree as possible; only subtrees holding live populations count.
std::vector<int> disjoint_subtrees(const LineageTree& tree, std::size_t n);

std::vector<SampleDraw> sample_localized(const LineageTree& tree, const SamplingConfig& cfg, Engine& rng);
std::vector<SampleDraw> sample_randomized(const LineageTree& tree, const SamplingConfig& cfg, Engine& rng);

/// Cell counts for the chosen populations, multinomial in their sizes.
std::vector<std::uint64_t> multinomial(Engine& rng, std::uint64_t n, const std::vector<double>& weights);

double true_vaf(const LineageTree& tree, const SimSnv& snv, const SampleDraw& draw);

struct NoiseConfig {
    std::optional<std::uint64_t> coverage;  // nullopt: no noise
    double error_rate = 1e-3;
};

/// Binomial read sampling followed by independent per-read allele flips.
double add_noise(double vaf, const NoiseConfig& cfg, Engine& rng);

/// Everything needed to score a reconstruction of a simulated dataset.
struct SimulationTruth {
    LineageTree tree;
    std::vector<SampleDraw> draws;
    SampleSet samples;                  // normal first
    std::vector<std::size_t> collected;  // SSNV ids, in table row order
    std::vector<BinaryProfile> presence;  // per collected SSNV
    std::vector<std::vector<double>> true_vafs;
    std::vector<bool> in_cnv_region;
};

struct SimulatedDataset {
    SimulationTruth truth;
    std::vector<SnvRecord> table;  // noisy VAFs, same order as truth.collected
};

struct ExperimentConfig {
    SimulationConfig sim;
    SamplingConfig sampling;
    SamplingScheme scheme = SamplingScheme::Localized;
    NoiseConfig noise;
};

/// Grows a tree (regrowing while it has no live tumour population), draws
/// samples and produces the SSNV table of every SSNV present in some sample.
SimulatedDataset simulate_dataset(const ExperimentConfig& cfg);

}  // namespace lichee
