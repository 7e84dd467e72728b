#include "lichee/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lichee {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pct(std::size_t num, std::size_t den) {
    return den == 0 ? kNaN : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

// Ancestor sets of every node of one bundle tree, indexed by node position.
struct TreeView {
    std::vector<int> node_of_row;           // node position per table row, -1 if absent
    std::vector<std::vector<char>> above;   // above[x][y]: x is a proper ancestor of y
    std::vector<bool> private_node;

    TreeView(const ResultBundle& b, std::size_t tree_index) {
        const std::size_t n = b.nodes.size();
        std::vector<int> parent(n, -1);
        for (const auto& e : b.trees.at(tree_index).edges) {
            const int p = b.node_index(e.parent);
            const int c = b.node_index(e.child);
            if (p < 0 || c < 0) throw std::invalid_argument("tree edge names an unknown node");
            parent[static_cast<std::size_t>(c)] = p;
        }
        above.assign(n, std::vector<char>(n, 0));
        for (std::size_t y = 0; y < n; ++y) {
            std::size_t guard = 0;
            for (int x = parent[y]; x >= 0; x = parent[static_cast<std::size_t>(x)]) {
                if (++guard > n) throw std::invalid_argument("tree edges contain a cycle");
                above[static_cast<std::size_t>(x)][y] = 1;
            }
        }
        private_node.resize(n);
        for (std::size_t i = 0; i < n; ++i) private_node[i] = !b.nodes[i].root && hamming_weight(b.nodes[i].profile) == 1;
        node_of_row.assign(b.snvs.size(), -1);
        for (std::size_t r = 0; r < b.snvs.size(); ++r) {
            if (b.snvs[r].node) node_of_row[r] = b.node_index(*b.snvs[r].node);
        }
    }

    Placement relation(std::size_t a, std::size_t b) const {
        const int x = node_of_row.at(a);
        const int y = node_of_row.at(b);
        if (x < 0 || y < 0) return Placement::Missing;
        if (x == y) return Placement::SameNode;
        if (above[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]) return Placement::FirstAbove;
        if (above[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]) return Placement::SecondAbove;
        return Placement::Siblings;
    }

    bool involves_private(std::size_t a, std::size_t b) const {
        return private_node[static_cast<std::size_t>(node_of_row[a])] ||
               private_node[static_cast<std::size_t>(node_of_row[b])];
    }
};

}  // namespace

double presence_sensitivity(const SimulationTruth& truth, const ResultBundle& result) {
    if (truth.collected.size() != result.snvs.size())
        throw std::invalid_argument("truth and result list different SSNV counts");
    if (truth.collected.empty()) return 100.0;
    std::size_t correct = 0;
    for (std::size_t r = 0; r < truth.collected.size(); ++r) {
        const auto& p = result.snvs[r].profile;
        if (p && *p == truth.presence[r]) ++correct;
    }
    return pct(correct, truth.collected.size());
}

std::vector<TruePair> pair_relationships(const SimulationTruth& truth) {
    std::vector<TruePair> out;
    const auto& tree = truth.tree;
    const std::size_t n = truth.collected.size();
    for (std::size_t a = 0; a < n; ++a) {
        const int oa = tree.snvs.at(truth.collected[a]).origin;
        for (std::size_t b = a + 1; b < n; ++b) {
            const int ob = tree.snvs.at(truth.collected[b]).origin;
            TruePair p{a, b, PairClass::Sibling, false};
            if (tree.is_ancestor(oa, ob)) {
                p.kind = PairClass::AncestorDescendant;
                p.a_above = true;
            } else if (tree.is_ancestor(ob, oa)) {
                p.kind = PairClass::AncestorDescendant;
            }
            out.push_back(p);
        }
    }
    return out;
}

Placement reconstructed_relation(const ResultBundle& result, std::size_t tree_index, std::size_t a, std::size_t b) {
    return TreeView(result, tree_index).relation(a, b);
}

MetricReport compare_tree(const SimulationTruth& truth, const ResultBundle& result, std::size_t tree_index) {
    MetricReport m;
    m.pct_snvs_assigned_correctly = presence_sensitivity(truth, result);
    m.simulated_snvs = static_cast<double>(truth.collected.size());
    std::size_t cnv = 0;
    for (bool c : truth.in_cnv_region) cnv += c;
    m.pct_snvs_in_cnv = pct(cnv, truth.collected.size());
    if (tree_index >= result.trees.size()) {
        m.pct_snvs_in_tree = m.pct_ad_pairs = m.pct_ad_ordered = m.pct_ad_correct = m.pct_ad_to_sib =
            m.pct_ad_to_sib_nopriv = m.pct_sib_pairs = m.pct_sib_correct = m.pct_sib_to_ad =
                m.pct_sib_to_ad_nopriv = kNaN;
        return m;
    }
    m.trees_reconstructed = 1;
    const TreeView view(result, tree_index);
    std::size_t in_tree = 0;
    for (int x : view.node_of_row) in_tree += x >= 0;
    m.pct_snvs_in_tree = pct(in_tree, truth.collected.size());

    std::size_t ad = 0, ad_present = 0, ad_ordered = 0, ad_correct = 0, ad_sib = 0, ad_sib_np = 0;
    std::size_t sib = 0, sib_present = 0, sib_correct = 0, sib_ad = 0, sib_ad_np = 0;
    for (const auto& p : pair_relationships(truth)) {
        const Placement where = view.relation(p.a, p.b);
        if (p.kind == PairClass::AncestorDescendant) {
            ++ad;
            if (where == Placement::Missing) continue;
            ++ad_present;
            if (where == Placement::FirstAbove || where == Placement::SecondAbove) {
                ++ad_ordered;
                if ((where == Placement::FirstAbove) == p.a_above) ++ad_correct;
            } else if (where == Placement::Siblings) {
                ++ad_sib;
                if (!view.involves_private(p.a, p.b)) ++ad_sib_np;
            }
        } else {
            ++sib;
            if (where == Placement::Missing) continue;
            ++sib_present;
            if (where == Placement::Siblings) {
                ++sib_correct;
            } else if (where == Placement::FirstAbove || where == Placement::SecondAbove) {
                ++sib_ad;
                if (!view.involves_private(p.a, p.b)) ++sib_ad_np;
            }
        }
    }
    m.pct_ad_pairs = pct(ad_present, ad);
    m.pct_ad_ordered = pct(ad_ordered, ad);
    m.pct_ad_correct = pct(ad_correct, ad_ordered);
    m.pct_ad_to_sib = pct(ad_sib, ad);
    m.pct_ad_to_sib_nopriv = pct(ad_sib_np, ad);
    m.pct_sib_pairs = pct(sib_present, sib);
    m.pct_sib_correct = pct(sib_correct, sib);
    m.pct_sib_to_ad = pct(sib_ad, sib);
    m.pct_sib_to_ad_nopriv = pct(sib_ad_np, sib);
    return m;
}

MetricReport average_reports(const std::vector<MetricReport>& reports) {
    MetricReport out;
    auto mean = [&](auto field, bool reconstructed_only) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : reports) {
            if (reconstructed_only && r.trees_reconstructed == 0) continue;
            const double v = r.*field;
            if (std::isnan(v)) continue;
            sum += v;
            ++n;
        }
        return n ? sum / static_cast<double>(n) : kNaN;
    };
    out.pct_snvs_assigned_correctly = mean(&MetricReport::pct_snvs_assigned_correctly, false);
    out.simulated_snvs = mean(&MetricReport::simulated_snvs, false);
    out.pct_snvs_in_cnv = mean(&MetricReport::pct_snvs_in_cnv, false);
    out.pct_snvs_in_tree = mean(&MetricReport::pct_snvs_in_tree, true);
    out.pct_ad_pairs = mean(&MetricReport::pct_ad_pairs, true);
    out.pct_ad_ordered = mean(&MetricReport::pct_ad_ordered, true);
    out.pct_ad_correct = mean(&MetricReport::pct_ad_correct, true);
    out.pct_ad_to_sib = mean(&MetricReport::pct_ad_to_sib, true);
    out.pct_ad_to_sib_nopriv = mean(&MetricReport::pct_ad_to_sib_nopriv, true);
    out.pct_sib_pairs = mean(&MetricReport::pct_sib_pairs, true);
    out.pct_sib_correct = mean(&MetricReport::pct_sib_correct, true);
    out.pct_sib_to_ad = mean(&MetricReport::pct_sib_to_ad, true);
    out.pct_sib_to_ad_nopriv = mean(&MetricReport::pct_sib_to_ad_nopriv, true);
    for (const auto& r : reports) out.trees_reconstructed += r.trees_reconstructed;
    return out;
}

RunConfig simulation_run_config() {
    RunConfig cfg;
    cfg.calling.t_present = 0.005;
    cfg.calling.t_absent = 0.005;
    cfg.clustering.min_cluster_size = 1;
    cfg.clustering.min_private_cluster_size = 1;
    cfg.network.min_node_support = 1;
    cfg.network.root_to_all = true;
    cfg.network.constrain_private = false;
    return cfg;
}

std::vector<MetricReport> run_experiment(const ExperimentSpec& spec, unsigned threads) {
    std::vector<MetricReport> reports(spec.replicates);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t r = next++; r < spec.replicates; r = next++) {
            try {
                ExperimentConfig cfg = spec.data;
                cfg.sim.seed = derive_seed(spec.seed, r);
                const SimulatedDataset data = simulate_dataset(cfg);
                const SnvTable table{data.truth.samples, data.table};
                reports[r] = compare_tree(data.truth, run_pipeline(spec.run, table));
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(spec.replicates, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return reports;
}

void write_metrics_header(std::ostream& out) {
    out << "experiment\ttrees\tsim_snvs\tpct_snvs_in_cnv\tsensitivity\tpct_snvs\tpct_ad\tpct_ad_ord\tpct_ad_corr"
           "\tpct_ad_to_sib\tpct_ad_to_sib_nopriv\tpct_sib\tpct_sib_corr\tpct_sib_to_ad\tpct_sib_to_ad_nopriv\n";
}

void write_metrics_row(std::ostream& out, const std::string& label, const MetricReport& r) {
    auto f = [&](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        out << '\t' << (std::isnan(v) ? "NA" : buf);
    };
    out << label << '\t' << r.trees_reconstructed;
    f(r.simulated_snvs);
    f(r.pct_snvs_in_cnv);
    f(r.pct_snvs_assigned_correctly);
    f(r.pct_snvs_in_tree);
    f(r.pct_ad_pairs);
    f(r.pct_ad_ordered);
    f(r.pct_ad_correct);
    f(r.pct_ad_to_sib);
    f(r.pct_ad_to_sib_nopriv);
    f(r.pct_sib_pairs);
    f(r.pct_sib_correct);
    f(r.pct_sib_to_ad);
    f(r.pct_sib_to_ad_nopriv);
    out << '\n';
}

}  // namespace lichee
