#include <doctest.h>

#include <cmath>
#include <set>

#include "lichee/simulator.hpp"

using namespace lichee;

namespace {

SimulationConfig fixed(double p_ssnv, double p_cnv, double p_death, int iterations) {
    SimulationConfig c;
    c.p_ssnv = p_ssnv;
    c.p_cnv = p_cnv;
    c.p_death = p_death;
    c.iterations = iterations;
    return c;
}

CellPopulation pop(int id, int parent, double size, EventKind ev = EventKind::Ssnv) {
    CellPopulation p;
    p.id = id;
    p.parent = parent;
    p.size = size;
    p.event = ev;
    return p;
}

}  // namespace

TEST_CASE("certain SSNV events double the tree every iteration") {
    Engine rng(1);
    const auto t = grow_tree(fixed(1.0, 0.0, 0.0, 2), rng);
    CHECK(t.populations.size() == 4);
    CHECK(t.snvs.size() == 3);
    for (const auto& p : t.populations) CHECK(p.alive);
    CHECK(t.populations[1].parent == 0);
    CHECK(t.populations[2].parent == 0);
    CHECK(t.populations[3].parent == 1);
}

TEST_CASE("certain death kills every population that had a turn") {
    Engine rng(1);
    const auto t = grow_tree(fixed(1.0, 0.0, 1.0, 3), rng);
    CHECK(t.populations[0].alive);
    for (const auto& p : t.populations) {
        if (p.parent < 0) continue;
        // only populations born in the last iteration are still alive
        CHECK(p.alive == (p.born == 3));
    }
}

TEST_CASE("default growth parameters give trees of hundreds of populations") {
    double total = 0.0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto cfg = fixed(0.15, 0.0, 0.06, 50);
        cfg.seed = s;
        total += static_cast<double>(grow_tree(cfg).populations.size());
    }
    CHECK(total / 20.0 >= 100.0);
}

TEST_CASE("lineage tree helpers") {
    LineageTree t;
    t.populations = {pop(0, -1, 10, EventKind::Root), pop(1, 0, 10), pop(2, 1, 10), pop(3, 0, 10)};
    t.snvs = {SimSnv{0, 1, 1, 100, 0, 0}, SimSnv{1, 3, 1, 200, 0, 0}};
    t.populations[1].ssnvs = {0};
    t.populations[3].ssnvs = {1};
    CHECK(t.is_ancestor(1, 2));
    CHECK_FALSE(t.is_ancestor(2, 1));
    CHECK_FALSE(t.is_ancestor(1, 3));
    CHECK(t.lineage(2) == std::vector<int>{0, 1, 2});
    CHECK(t.carries(2, 0));
    CHECK_FALSE(t.carries(3, 0));
    CHECK(t.children()[0] == std::vector<int>{1, 3});
}

TEST_CASE("true VAF without copy-number changes") {
    LineageTree t;
    t.populations = {pop(0, -1, 10, EventKind::Root), pop(1, 0, 10), pop(2, 0, 10)};
    t.snvs = {SimSnv{0, 1, 1, 100, 0, 0}};
    SampleDraw d;
    d.cells = {{1, 50}, {2, 50}};
    CHECK(true_vaf(t, t.snvs[0], d) == doctest::Approx(0.25));
    d.cells = {};
    d.normal_cells = 100;
    CHECK(true_vaf(t, t.snvs[0], d) == 0.0);
}

TEST_CASE("copy gain of the variant haplotype") {
    LineageTree t;
    t.populations = {pop(0, -1, 10, EventKind::Root), pop(1, 0, 10), pop(2, 1, 10, EventKind::Cnv)};
    t.snvs = {SimSnv{0, 1, 3, 100, 0, 1}};
    t.populations[2].cnv = CnvEvent{3, 0, 1};
    const auto st = locus_state(t, 2, t.snvs[0]);
    CHECK(st.variant == 2);
    CHECK(st.reference == 1);
    // the other haplotype or another arm leave the carrier at 1/1
    t.populations[2].cnv = CnvEvent{3, 0, 0};
    CHECK(locus_state(t, 2, t.snvs[0]).variant == 1);
    CHECK(locus_state(t, 2, t.snvs[0]).reference == 2);
    t.populations[2].cnv = CnvEvent{3, 1, 1};
    CHECK(locus_state(t, 2, t.snvs[0]).reference == 1);
    SampleDraw d;
    t.populations[2].cnv = CnvEvent{3, 0, 1};
    d.cells = {{2, 10}};
    CHECK(true_vaf(t, t.snvs[0], d) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("noise") {
    Engine rng(9);
    NoiseConfig none;
    CHECK(add_noise(0.3, none, rng) == 0.3);

    NoiseConfig deep{10000, 1e-3};
    const int draws = 10000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < draws; ++k) {
        const double x = add_noise(0.25, deep, rng);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    // the flips shift the mean by (1 - 2p) * 0.25 + p
    CHECK(mean == doctest::Approx(0.25 * (1 - 2e-3) + 1e-3).epsilon(2e-3));
    CHECK(var == doctest::Approx(0.25 * 0.75 / 10000).epsilon(0.05));

    NoiseConfig floor{1000, 1e-3};
    sum = 0.0;
    for (int k = 0; k < 100000; ++k) sum += add_noise(0.0, floor, rng);
    CHECK(sum / 100000 == doctest::Approx(0.001).epsilon(0.02));
}

TEST_CASE("multinomial counts sum to n") {
    Engine rng(4);
    for (int k = 0; k < 50; ++k) {
        const auto c = multinomial(rng, 1000, {1.0, 5.0, 0.0, 2.0});
        CHECK(c[0] + c[1] + c[2] + c[3] == 1000);
        CHECK(c[2] == 0);
    }
    CHECK_THROWS(multinomial(rng, 10, {-1.0}));
}

TEST_CASE("disjoint subtrees") {
    // root -> 1 -> {2, 3}; 2 -> {4, 5}
    LineageTree t;
    t.populations = {pop(0, -1, 1, EventKind::Root), pop(1, 0, 1), pop(2, 1, 1), pop(3, 1, 1), pop(4, 2, 1),
                     pop(5, 2, 1)};
    CHECK(disjoint_subtrees(t, 1) == std::vector<int>{2});
    CHECK(disjoint_subtrees(t, 2) == std::vector<int>{2, 3});
    CHECK(disjoint_subtrees(t, 3) == std::vector<int>{3, 4, 5});
    CHECK(disjoint_subtrees(t, 10) == std::vector<int>{3, 4, 5});
    t.populations[3].alive = false;
    CHECK(disjoint_subtrees(t, 2) == std::vector<int>{4, 5});
}

TEST_CASE("localized sampling with two branches reuses them round-robin") {
    LineageTree t;
    t.populations = {pop(0, -1, 1, EventKind::Root), pop(1, 0, 100), pop(2, 0, 100)};
    SamplingConfig sc;
    sc.samples = 4;
    Engine rng(3);
    const auto draws = sample_localized(t, sc, rng);
    REQUIRE(draws.size() == 4);
    for (std::size_t j = 0; j < draws.size(); ++j) {
        const auto& d = draws[j];
        CHECK(d.normal_fraction <= 0.2);
        std::uint64_t total = d.normal_cells;
        for (const auto& [p, n] : d.cells) total += n;
        CHECK(total == sc.cells_per_sample);
    }
    sc.samples = 1;
    const auto one = sample_localized(t, sc, rng);
    REQUIRE(one.size() == 1);
    for (const auto& [p, n] : one[0].cells) CHECK(p == 1);
}

TEST_CASE("randomized sampling of a single live population is pure") {
    LineageTree t;
    t.populations = {pop(0, -1, 1, EventKind::Root), pop(1, 0, 100), pop(2, 0, 100)};
    t.populations[2].alive = false;
    SamplingConfig sc;
    Engine rng(3);
    for (const auto& d : sample_randomized(t, sc, rng)) {
        REQUIRE(d.cells.size() == 1);
        CHECK(d.cells[0].first == 1);
        CHECK(d.normal_cells == 0);
    }
}

TEST_CASE("dataset simulation is reproducible and consistent") {
    ExperimentConfig cfg;
    cfg.sim.seed = 12;
    cfg.noise.coverage = 1000;
    const auto a = simulate_dataset(cfg);
    const auto b = simulate_dataset(cfg);
    REQUIRE(a.table == b.table);
    CHECK(a.truth.collected == b.truth.collected);
    const auto& truth = a.truth;
    CHECK(truth.samples.size() == cfg.sampling.samples + 1);
    for (std::size_t r = 0; r < truth.collected.size(); ++r) {
        CHECK_FALSE(truth.presence[r][0]);
        CHECK_FALSE(truth.presence[r].all_zero());
        for (std::size_t j = 0; j < truth.samples.size(); ++j) {
            const double v = truth.true_vafs[r][j];
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK((v > 0.0) == truth.presence[r][j]);
        }
    }
    for (const auto& d : truth.draws)
        for (const auto& [p, n] : d.cells) CHECK(truth.tree.populations[static_cast<std::size_t>(p)].alive);

    cfg.sim.seed = 13;
    CHECK_FALSE(simulate_dataset(cfg).table == a.table);
}

TEST_CASE("configuration validation") {
    auto c = fixed(1.5, 0, 0, 1);
    CHECK_THROWS(c.validate());
    c = fixed(0.1, 0, 0, 0);
    CHECK_THROWS(c.validate());
    c = fixed(0.1, 0, 0, 1);
    c.min_population = 10;
    c.max_population = 1;
    CHECK_THROWS(c.validate());
}
