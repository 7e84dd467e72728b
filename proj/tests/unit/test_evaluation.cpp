#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lichee/evaluation.hpp"

using namespace lichee;

namespace {

// Truth: root -> A -> {B, C}; one SSNV per population, rows a, b, c.
SimulationTruth hand_truth() {
    SimulationTruth t;
    for (int id = 0; id < 4; ++id) {
        CellPopulation p;
        p.id = id;
        p.parent = id == 0 ? -1 : (id == 1 ? 0 : 1);
        p.size = 100;
        t.tree.populations.push_back(p);
    }
    for (std::size_t s = 0; s < 3; ++s) {
        SimSnv snv;
        snv.id = s;
        snv.origin = static_cast<int>(s) + 1;
        t.tree.snvs.push_back(snv);
        t.collected.push_back(s);
        t.in_cnv_region.push_back(false);
    }
    t.samples = SampleSet{{"normal", "S1", "S2"}, 0};
    t.presence = {BinaryProfile::parse("011"), BinaryProfile::parse("010"), BinaryProfile::parse("001")};
    t.true_vafs = {{0, 0.4, 0.4}, {0, 0.2, 0}, {0, 0, 0.2}};
    return t;
}

// Bundle whose nodes 1..3 hold rows 0..2, with the given tree edges.
ResultBundle hand_bundle(const std::vector<BundleEdge>& edges) {
    ResultBundle b;
    b.samples = SampleSet{{"normal", "S1", "S2"}, 0};
    const std::vector<std::string> profiles = {"111", "011", "010", "001"};
    for (int id = 0; id < 4; ++id) {
        BundleNode n;
        n.id = id;
        n.root = id == 0;
        n.profile = BinaryProfile::parse(profiles[static_cast<std::size_t>(id)]);
        if (id > 0) n.snvs = {static_cast<std::size_t>(id - 1)};
        b.nodes.push_back(n);
    }
    for (std::size_t r = 0; r < 3; ++r) {
        BundleSnv s;
        s.record.vaf = {0, 0.1, 0.1};
        s.profile = b.nodes[r + 1].profile;
        s.node = static_cast<int>(r) + 1;
        b.snvs.push_back(s);
    }
    BundleTree t;
    t.rank = 1;
    t.edges = edges;
    b.trees.push_back(t);
    return b;
}

}  // namespace

TEST_CASE("pair classification") {
    const auto pairs = pair_relationships(hand_truth());
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].kind == PairClass::AncestorDescendant);
    CHECK(pairs[0].a_above);
    CHECK(pairs[1].kind == PairClass::AncestorDescendant);
    CHECK(pairs[2].kind == PairClass::Sibling);
}

TEST_CASE("same-population SSNVs are siblings") {
    auto t = hand_truth();
    t.tree.snvs[2].origin = 2;
    CHECK(pair_relationships(t)[2].kind == PairClass::Sibling);
}

TEST_CASE("a faithful reconstruction scores perfectly") {
    const auto b = hand_bundle({{0, 1}, {1, 2}, {1, 3}});
    const auto m = compare_tree(hand_truth(), b);
    CHECK(m.trees_reconstructed == 1);
    CHECK(m.pct_snvs_assigned_correctly == 100.0);
    CHECK(m.pct_snvs_in_tree == 100.0);
    CHECK(m.pct_ad_correct == 100.0);
    CHECK(m.pct_ad_ordered == 100.0);
    CHECK(m.pct_sib_to_ad == 0.0);
    CHECK(m.pct_sib_correct == 100.0);
    CHECK(reconstructed_relation(b, 0, 0, 1) == Placement::FirstAbove);
    CHECK(reconstructed_relation(b, 0, 1, 2) == Placement::Siblings);
}

TEST_CASE("an inverted edge breaks exactly that pair") {
    // B above A above C
    const auto b = hand_bundle({{0, 2}, {2, 1}, {1, 3}});
    const auto m = compare_tree(hand_truth(), b);
    CHECK(reconstructed_relation(b, 0, 0, 1) == Placement::SecondAbove);
    CHECK(m.pct_ad_ordered == 100.0);
    CHECK(m.pct_ad_correct == 50.0);
    CHECK(m.pct_ad_to_sib == 0.0);
    // b now sits above c
    CHECK(m.pct_sib_to_ad == 100.0);
    CHECK(m.pct_sib_to_ad_nopriv == 0.0);
}

TEST_CASE("flattened and missing placements") {
    auto b = hand_bundle({{0, 1}, {0, 2}, {1, 3}});
    auto m = compare_tree(hand_truth(), b);
    CHECK(m.pct_ad_ordered == 50.0);
    CHECK(m.pct_ad_to_sib == 50.0);
    CHECK(m.pct_ad_correct == 100.0);
    b.snvs[2].node.reset();
    b.snvs[2].profile = BinaryProfile::parse("011");
    m = compare_tree(hand_truth(), b);
    CHECK(m.pct_snvs_in_tree == doctest::Approx(200.0 / 3.0));
    CHECK(m.pct_snvs_assigned_correctly == doctest::Approx(200.0 / 3.0));
    CHECK(m.pct_ad_pairs == 50.0);
    CHECK(m.pct_sib_pairs == 0.0);
}

TEST_CASE("no tree means only sensitivity is scored") {
    auto b = hand_bundle({});
    b.trees.clear();
    const auto m = compare_tree(hand_truth(), b);
    CHECK(m.trees_reconstructed == 0);
    CHECK(m.pct_snvs_assigned_correctly == 100.0);
    CHECK(std::isnan(m.pct_ad_correct));
    const auto avg = average_reports({m, compare_tree(hand_truth(), hand_bundle({{0, 2}, {2, 1}, {1, 3}}))});
    CHECK(avg.trees_reconstructed == 1);
    CHECK(avg.pct_ad_correct == 50.0);
    CHECK(avg.pct_snvs_assigned_correctly == 100.0);
}

TEST_CASE("metrics table") {
    std::ostringstream out;
    write_metrics_header(out);
    MetricReport r;
    r.pct_ad_correct = std::nan("");
    write_metrics_row(out, "x", r);
    const auto text = out.str();
    CHECK(text.rfind("experiment\t", 0) == 0);
    CHECK(text.find("\nx\t0\t") != std::string::npos);
    CHECK(text.find("NA") != std::string::npos);
}

TEST_CASE("experiments are independent of the thread count") {
    ExperimentSpec spec;
    spec.data.noise.coverage = 1000;
    spec.run = simulation_run_config();
    spec.replicates = 4;
    spec.seed = 3;
    const auto one = run_experiment(spec, 1);
    const auto many = run_experiment(spec, 3);
    REQUIRE(one.size() == 4);
    for (std::size_t k = 0; k < one.size(); ++k) {
        CHECK(one[k].trees_reconstructed == many[k].trees_reconstructed);
        CHECK(one[k].pct_snvs_assigned_correctly == many[k].pct_snvs_assigned_correctly);
        if (one[k].trees_reconstructed) CHECK(one[k].pct_ad_correct == many[k].pct_ad_correct);
    }
}
