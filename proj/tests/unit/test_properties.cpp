// Randomized invariant checks. Case counts: 1000 for profiles and grouping,
// at least 100 for clustering, network, search and ranking.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "lichee/calling.hpp"
#include "lichee/clustering.hpp"
#include "lichee/evaluation.hpp"
#include "lichee/pipeline.hpp"
#include "lichee/ranking.hpp"
#include "lichee/search.hpp"
#include "lichee/simulator.hpp"

using namespace lichee;

namespace {

constexpr int kMany = 1000;
constexpr int kSome = 100;

SnvRecord random_snv(Engine& rng, std::size_t samples) {
    SnvRecord r{"1", 1, "", {}};
    for (std::size_t i = 0; i < samples; ++i) {
        const auto pick = gen::index(rng, 4);
        r.vaf.push_back(pick == 0 ? 0.0 : pick == 1 ? 0.007 : gen::uniform(rng, 0.02, 0.5));
    }
    return r;
}

CallingConfig grey_calling() {
    CallingConfig c;
    c.t_absent = 0.005;
    c.t_present = 0.01;
    return c;
}

}  // namespace

TEST_CASE("covers is a partial order and bounds the weight") {
    Engine rng(1);
    for (int k = 0; k < kMany; ++k) {
        const std::size_t n = 1 + gen::index(rng, 7);
        const auto p = gen::random_profile(rng, n);
        const auto q = gen::random_profile(rng, n);
        const auto r = gen::random_profile(rng, n);
        CHECK(covers(p, p));
        if (covers(p, q) && covers(q, p)) CHECK(p == q);
        if (covers(p, q) && covers(q, r)) CHECK(covers(p, r));
        if (covers(p, q)) CHECK(hamming_weight(p) >= hamming_weight(q));
    }
}

TEST_CASE("a ternary profile is compatible with exactly 2^stars binary profiles") {
    Engine rng(2);
    for (int k = 0; k < kMany; ++k) {
        const std::size_t n = 1 + gen::index(rng, 7);
        const auto t = gen::random_ternary(rng, n);
        std::size_t count = 0;
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            BinaryProfile g(n);
            for (std::size_t i = 0; i < n; ++i) g.set(i, (mask >> i) & 1U);
            count += ternary_compatible(t, g);
        }
        CHECK(count == (std::size_t{1} << t.unknown_count()));
        const auto subs = t.substitutions();
        CHECK(subs.size() == count);
        CHECK(std::is_sorted(subs.begin(), subs.end()));
        for (const auto& s : subs) CHECK(ternary_compatible(t, s));
    }
}

TEST_CASE("grouping places every SSNV exactly once, deterministically") {
    Engine rng(3);
    for (int k = 0; k < kMany; ++k) {
        const std::size_t samples = 3 + gen::index(rng, 4);
        const std::size_t n = gen::index(rng, 16);
        std::vector<SnvRecord> snvs;
        for (std::size_t i = 0; i < n; ++i) snvs.push_back(random_snv(rng, samples));
        const auto cfg = grey_calling();
        const auto g = group_snvs(snvs, cfg);
        std::vector<int> seen(n, 0);
        for (const auto& grp : g.groups) {
            CHECK_FALSE(grp.members.empty());
            CHECK_FALSE(grp.profile.all_zero());
            CHECK_FALSE(grp.profile[0]);
            for (auto m : grp.members) {
                ++seen[m];
                CHECK(ternary_compatible(mark_presence(snvs[m], cfg), grp.profile));
            }
        }
        for (const auto& d : g.dropped) ++seen[d.index];
        for (int s : seen) CHECK(s == 1);
        const auto again = group_snvs(snvs, cfg);
        CHECK(again.groups == g.groups);
        CHECK(again.dropped == g.dropped);
    }
}

TEST_CASE("greedy cover stays within the harmonic bound of the optimum") {
    Engine rng(4);
    auto cfg = grey_calling();
    cfg.normal_index = std::nullopt;
    for (int k = 0; k < kMany; ++k) {
        const std::size_t samples = 2 + gen::index(rng, 4);
        const std::size_t n = 1 + gen::index(rng, 10);
        std::vector<SnvRecord> snvs;
        std::vector<UnresolvedSnv> residual;
        std::vector<TernaryProfile> items;
        for (std::size_t i = 0; i < n; ++i) {
            auto t = gen::random_ternary(rng, samples, 0.4);
            t.set(gen::index(rng, samples), Mark::Present);  // keeps every substitution non-empty
            SnvRecord r{"1", 1, "", {}};
            for (std::size_t s = 0; s < samples; ++s)
                r.vaf.push_back(t[s] == Mark::Present ? 0.3 : t[s] == Mark::Absent ? 0.0 : gen::uniform(rng, 0.006, 0.009));
            snvs.push_back(r);
            residual.push_back({i, t});
            items.push_back(t);
        }
        const auto out = cover_residual(residual, snvs, cfg);
        CHECK(out.dropped.empty());
        CHECK(out.groups.size() <= n);
        const double bound = static_cast<double>(oracle::exhaustive_min_cover(items)) * oracle::harmonic(n);
        CHECK(static_cast<double>(out.groups.size()) <= bound + 1e-9);
        std::size_t placed = 0;
        for (const auto& g : out.groups) {
            placed += g.members.size();
            for (auto m : g.members) CHECK(ternary_compatible(items[m], g.profile));
        }
        CHECK(placed == n);
    }
}

TEST_CASE("clustering invariants") {
    Engine rng(5);
    for (int k = 0; k < kSome; ++k) {
        const std::size_t samples = 2 + gen::index(rng, 3);
        const std::size_t n = 1 + gen::index(rng, 25);
        std::vector<SnvRecord> snvs;
        const std::size_t modes = 1 + gen::index(rng, 3);
        std::vector<std::vector<double>> centers(modes);
        for (auto& c : centers)
            for (std::size_t s = 0; s < samples; ++s) c.push_back(gen::uniform(rng, 0.05, 0.45));
        for (std::size_t i = 0; i < n; ++i) {
            SnvRecord r{"1", 1, "", {0.0}};
            const auto& c = centers[gen::index(rng, modes)];
            for (double x : c) r.vaf.push_back(std::clamp(x + gen::uniform(rng, -0.03, 0.03), 0.0, 1.0));
            snvs.push_back(r);
        }
        SnvGroup g{BinaryProfile::all_ones(samples + 1), {}, true};
        g.profile.set(0, false);
        for (std::size_t i = 0; i < n; ++i) g.members.push_back(i);
        ClusteringConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(k);
        cfg.min_cluster_size = 1 + static_cast<int>(gen::index(rng, 3));
        cfg.collapse_distance = gen::uniform(rng, 0.0, 0.15);

        const auto m = GroupVafMatrix::from_group(g, snvs);
        Engine em_rng(static_cast<std::uint64_t>(k));
        const auto mix = fit_mixture(m.rows, 1 + static_cast<int>(gen::index(rng, std::min<std::size_t>(n, 4))), cfg, em_rng);
        for (std::size_t t = 1; t < mix.trace.size(); ++t) CHECK(mix.trace[t] >= mix.trace[t - 1] - 1e-9);

        const auto out = cluster_group(g, snvs, cfg);
        std::vector<std::size_t> all;
        for (const auto& c : out) {
            CHECK_NOTHROW(c.validate());
            all.insert(all.end(), c.members.begin(), c.members.end());
            if (out.size() > 1) CHECK(c.members.size() >= static_cast<std::size_t>(cfg.min_cluster_size));
        }
        std::sort(all.begin(), all.end());
        CHECK(all == g.members);
        for (std::size_t a = 0; a < out.size(); ++a)
            for (std::size_t b = a + 1; b < out.size(); ++b)
                CHECK(centroid_distance(out[a], out[b]) >= cfg.collapse_distance);
        CHECK(cluster_group(g, snvs, cfg) == out);
    }
}

TEST_CASE("network invariants") {
    Engine rng(6);
    for (int k = 0; k < kSome; ++k) {
        const std::size_t samples = 3 + gen::index(rng, 4);
        const std::size_t count = 1 + gen::index(rng, 10);
        std::vector<Cluster> clusters;
        for (std::size_t c = 0; c < count; ++c) {
            BinaryProfile p(samples);
            while (p.all_zero())
                for (std::size_t s = 1; s < samples; ++s) p.set(s, lichee::bernoulli(rng, 0.5));
            std::vector<double> full(samples, 0.0);
            for (std::size_t s = 0; s < samples; ++s)
                if (p[s]) full[s] = gen::uniform(rng, 0.01, 0.5);
            clusters.push_back(gen::make_cluster(static_cast<int>(c) + 1, p.to_string(), full, {c},
                                                 lichee::bernoulli(rng, 0.5)));
        }
        NetworkConfig cfg;
        cfg.min_node_support = 1;
        cfg.constrain_private = lichee::bernoulli(rng, 0.5);
        cfg.root_to_all = lichee::bernoulli(rng, 0.5);
        cfg.epsilon_edge = gen::uniform(rng, 0.0, 0.15);
        const auto net = build_network(clusters, samples, cfg);
        CHECK(is_acyclic(net));
        CHECK(std::is_sorted(net.edges.begin(), net.edges.end()));
        const auto parents = net.parents();
        for (std::size_t v = 1; v < net.size(); ++v) {
            CHECK_FALSE(parents[v].empty());
            CHECK(net.nodes[v].level == hamming_weight(net.nodes[v].profile()));
        }
        for (const auto& e : net.edges) {
            const auto& u = net.nodes[static_cast<std::size_t>(e.parent)];
            const auto& v = net.nodes[static_cast<std::size_t>(e.child)];
            CHECK(u.level >= v.level);
            CHECK(covers(u.profile(), v.profile()));
            if (u.level == v.level && !u.is_root) CHECK(u.profile() == v.profile());
            if (!u.is_root) CHECK(admits_edge(u, v, cfg));
        }
        CHECK(build_network(clusters, samples, cfg) == net);
    }
}

TEST_CASE("search matches brute force on random DAGs") {
    Engine rng(7);
    for (int k = 0; k < kSome * 2; ++k) {
        const auto net = gen::random_dag(rng, 8, 16, 1 + gen::index(rng, 3));
        SearchConfig cfg;
        cfg.epsilon_tree = gen::uniform(rng, 0.0, 0.2);
        const auto r = enumerate_trees(net, cfg);
        std::set<std::vector<int>> got;
        for (const auto& t : r.trees) {
            CHECK(tree_sum_ok(net, t, cfg));
            got.insert(t.parent);
        }
        CHECK(got.size() == r.trees.size());
        CHECK(got == oracle::brute_force_trees(net, cfg.epsilon_tree));
        // pruning soundness: a violating star of the root's children never extends
        std::vector<std::vector<int>> kids(net.size());
        for (const auto& e : net.edges)
            if (e.parent == 0) kids[0].push_back(e.child);
        if (!local_sum_ok(net, kids, 0, cfg)) {
            for (const auto& t : r.trees) {
                bool superset = true;
                for (int c : kids[0]) superset = superset && t.parent[static_cast<std::size_t>(c)] == 0;
                CHECK_FALSE(superset);
            }
        }
    }
}

TEST_CASE("QP and ranking invariants") {
    Engine rng(8);
    for (int k = 0; k < kSome; ++k) {
        const auto tc = gen::random_tree_case(rng, 3, 6, 1 + gen::index(rng, 3));
        const double eps = gen::uniform(rng, 0.01, 0.15);
        const auto sol = solve_qp(tc.net, tc.tree, eps);
        const auto grid = oracle::grid_qp(tc.net, tc.tree.parent, std::round(eps * 1000) / 1000);
        const auto rounded = solve_qp(tc.net, tc.tree, std::round(eps * 1000) / 1000);
        CHECK(rounded.feasible == grid.feasible);
        if (rounded.feasible) CHECK(std::abs(rounded.objective - grid.objective) <= 1e-4);
        if (sol.feasible) {
            const double n = static_cast<double>(tc.net.size() * tc.net.samples);
            CHECK(sol.objective <= n * eps * eps + 1e-12);
            CHECK(sol.kkt_residual <= 1e-6);
            const auto kids = tc.tree.children();
            for (std::size_t v = 0; v < tc.net.size(); ++v) {
                for (std::size_t i = 0; i < tc.net.samples; ++i) {
                    const double e = sol.deviations[v][i];
                    CHECK(std::abs(e) <= eps + 1e-9);
                    CHECK(e <= tc.net.nodes[v].full_centroid[i] + 1e-9);
                    if (kids[v].empty()) continue;
                    double sum = 0.0;
                    for (int c : kids[v])
                        sum += tc.net.nodes[static_cast<std::size_t>(c)].full_centroid[i] +
                               sol.deviations[static_cast<std::size_t>(c)][i];
                    CHECK(sum <= tc.net.nodes[v].full_centroid[i] + e + 1e-7);
                }
            }
        }
        if (local_score(tc.net, tc.tree) == 0.0) {
            CHECK(sol.feasible);
            CHECK(sol.objective == 0.0);
        }
    }
}

TEST_CASE("the top-ranked tree has the smallest QP objective") {
    Engine rng(9);
    for (int k = 0; k < kSome; ++k) {
        const auto net = gen::random_dag(rng, 6, 12, 2);
        SearchConfig cfg;
        cfg.epsilon_tree = 0.1;
        const auto trees = enumerate_trees(net, cfg).trees;
        const auto ranked = rank_trees(net, trees, 0.1, 3);
        std::size_t solved = 0;
        for (const auto& r : ranked) {
            if (!r.qp) continue;
            ++solved;
            CHECK(ranked.front().qp->objective <= r.qp->objective);
        }
        for (std::size_t j = 0; j < ranked.size(); ++j) CHECK(ranked[j].rank == static_cast<int>(j) + 1);
        if (!ranked.empty()) {
            CHECK(ranked.front().qp.has_value());
            for (std::size_t i = 0; i < net.samples; ++i) {
                const auto d = decompose_sample(net, ranked.front(), i);
                for (const auto& l : d.lineages) {
                    CHECK(l.prevalence >= 0.0);
                    CHECK(l.path.front() == 0);
                    CHECK(net.nodes[static_cast<std::size_t>(l.path.back())].present(i));
                }
            }
        }
    }
}

TEST_CASE("simulator invariants") {
    for (std::uint64_t seed = 1; seed <= kSome; ++seed) {
        ExperimentConfig cfg;
        cfg.sim.seed = seed;
        cfg.sim.p_cnv = seed % 2 ? 0.0 : 0.1;
        cfg.scheme = seed % 3 ? SamplingScheme::Localized : SamplingScheme::Randomized;
        const auto data = simulate_dataset(cfg);
        const auto& t = data.truth;
        const auto& tree = t.tree;
        Engine pick(seed);
        for (const auto& p : tree.populations) {
            if (p.parent < 0 || tree.snvs.empty()) continue;
            // mutations of a population are its parent's plus its own
            for (int k = 0; k < 10; ++k) {
                const auto& s = tree.snvs[gen::index(pick, tree.snvs.size())];
                const bool own = s.origin == p.id;
                CHECK(tree.carries(p.id, s.id) == (own || tree.carries(p.parent, s.id)));
            }
        }
        for (const auto& d : t.draws)
            for (const auto& [pop, cells] : d.cells) {
                CHECK(tree.populations[static_cast<std::size_t>(pop)].alive);
                CHECK(cells > 0);
            }
        for (std::size_t r = 0; r < t.collected.size(); ++r) {
            const auto& snv = tree.snvs[t.collected[r]];
            for (std::size_t j = 0; j < t.draws.size(); ++j) {
                const double v = t.true_vafs[r][j + 1];
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                if (cfg.sim.p_cnv == 0.0) {
                    std::uint64_t carriers = 0, total = t.draws[j].normal_cells;
                    for (const auto& [pop, cells] : t.draws[j].cells) {
                        total += cells;
                        if (tree.carries(pop, snv.id)) carriers += cells;
                    }
                    CHECK(v == static_cast<double>(carriers) / (2.0 * static_cast<double>(total)));
                }
            }
        }
        CHECK(simulate_dataset(cfg).table == data.table);
    }
}

TEST_CASE("evaluation invariants") {
    for (std::uint64_t seed = 1; seed <= kSome; ++seed) {
        ExperimentConfig sim;
        sim.sim.seed = seed;
        sim.scheme = seed % 2 ? SamplingScheme::Localized : SamplingScheme::Randomized;
        const auto data = simulate_dataset(sim);
        auto run = simulation_run_config();
        run.search.max_grow_calls = 1000000;
        const SnvTable table{data.truth.samples, data.table};
        const auto b = run_pipeline(run, table);
        const auto m = compare_tree(data.truth, b);
        if (!m.trees_reconstructed) continue;
        for (double v : {m.pct_snvs_assigned_correctly, m.pct_snvs_in_tree, m.pct_ad_pairs, m.pct_ad_ordered,
                         m.pct_ad_correct, m.pct_ad_to_sib, m.pct_sib_pairs, m.pct_sib_correct, m.pct_sib_to_ad}) {
            if (std::isnan(v)) continue;
            CHECK(v >= 0.0);
            CHECK(v <= 100.0);
        }
        if (!std::isnan(m.pct_ad_pairs)) {
            CHECK(m.pct_ad_ordered <= m.pct_ad_pairs + 1e-9);
            CHECK(m.pct_ad_to_sib_nopriv <= m.pct_ad_to_sib + 1e-9);
            // present AD pairs split into ordered, flattened and co-clustered
            std::size_t ad = 0, present = 0, ordered = 0, flat = 0, same = 0;
            for (const auto& p : pair_relationships(data.truth)) {
                if (p.kind != PairClass::AncestorDescendant) continue;
                ++ad;
                const auto where = reconstructed_relation(b, 0, p.a, p.b);
                if (where == Placement::Missing) continue;
                ++present;
                if (where == Placement::SameNode) ++same;
                else if (where == Placement::Siblings) ++flat;
                else ++ordered;
            }
            CHECK(present == ordered + flat + same);
            CHECK(m.pct_ad_to_sib == doctest::Approx(100.0 * static_cast<double>(flat) / static_cast<double>(ad)));
        }

        // relabel the rows by reversing them
        const std::size_t n = data.truth.collected.size();
        SimulationTruth rt = data.truth;
        ResultBundle rb = b;
        for (std::size_t r = 0; r < n; ++r) {
            rt.collected[r] = data.truth.collected[n - 1 - r];
            rt.presence[r] = data.truth.presence[n - 1 - r];
            rt.true_vafs[r] = data.truth.true_vafs[n - 1 - r];
            rt.in_cnv_region[r] = data.truth.in_cnv_region[n - 1 - r];
            rb.snvs[r] = b.snvs[n - 1 - r];
        }
        for (auto& node : rb.nodes)
            for (auto& s : node.snvs) s = n - 1 - s;
        for (auto& d : rb.dropped) d.index = n - 1 - d.index;
        const auto mr = compare_tree(rt, rb);
        auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == doctest::Approx(y); };
        CHECK(same(mr.pct_snvs_assigned_correctly, m.pct_snvs_assigned_correctly));
        CHECK(same(mr.pct_ad_correct, m.pct_ad_correct));
        CHECK(same(mr.pct_ad_to_sib, m.pct_ad_to_sib));
        CHECK(same(mr.pct_sib_to_ad, m.pct_sib_to_ad));
        CHECK(same(mr.pct_sib_to_ad_nopriv, m.pct_sib_to_ad_nopriv));
    }
}
