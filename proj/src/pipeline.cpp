#include "lichee/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <stdexcept>

#include "lichee/ranking.hpp"

namespace lichee {

using nlohmann::json;

void RunConfig::validate() const {
    calling.validate();
    clustering.validate();
    network.validate();
    search.validate();
    if (qp_epsilon < 0.0) throw std::invalid_argument("qp_epsilon must be >= 0");
    if (qp_batch < 1) throw std::invalid_argument("qp_batch must be >= 1");
}

void RunConfig::set_epsilon(double eps) {
    network.epsilon_edge = eps;
    search.epsilon_tree = eps;
    qp_epsilon = eps;
}

json config_to_json(const RunConfig& c) {
    const char* mode = c.mode == InputMode::Vaf ? "vaf" : c.mode == InputMode::Cp ? "cp" : "clusters";
    return {
        {"mode", mode},
        {"calling",
         {{"t_present", c.calling.t_present},
          {"t_absent", c.calling.t_absent},
          {"min_robust_peers", c.calling.min_robust_peers},
          {"sim_threshold_frac", c.calling.sim_threshold_frac},
          {"max_star_positions", c.calling.max_star_positions}}},
        {"clustering",
         {{"max_components", c.clustering.max_components},
          {"min_cluster_size", c.clustering.min_cluster_size},
          {"min_private_cluster_size", c.clustering.min_private_cluster_size},
          {"collapse_distance", c.clustering.collapse_distance},
          {"em_max_iters", c.clustering.em_max_iters},
          {"em_tol", c.clustering.em_tol},
          {"em_restarts", c.clustering.em_restarts},
          {"seed", c.clustering.seed}}},
        {"network",
         {{"epsilon_edge", c.network.epsilon_edge},
          {"root_vaf", c.network.root_vaf},
          {"constrain_private", c.network.constrain_private},
          {"root_to_all", c.network.root_to_all},
          {"min_node_support", c.network.min_node_support}}},
        {"search",
         {{"epsilon_tree", c.search.epsilon_tree},
          {"max_trees", c.search.max_trees},
          {"max_grow_calls", c.search.max_grow_calls}}},
        {"ranking", {{"qp_epsilon", c.qp_epsilon}, {"qp_batch", c.qp_batch}, {"num_save", c.num_save}}},
    };
}

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

BundleTree to_bundle_tree(const ConstraintNetwork& net, const RankedTree& r, const SampleSet& samples) {
    BundleTree t;
    t.rank = r.rank;
    t.local_score = r.local_score;
    for (const auto& e : r.tree.edges()) {
        t.edges.push_back({net.nodes[static_cast<std::size_t>(e.parent)].id, net.nodes[static_cast<std::size_t>(e.child)].id});
    }
    std::sort(t.edges.begin(), t.edges.end());
    if (r.qp && r.qp->feasible) {
        t.qp_objective = r.qp->objective;
        t.deviations = r.qp->deviations;
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i == samples.normal_index) continue;
        const SampleDecomposition d = decompose_sample(net, r, i);
        BundleDecomposition bd;
        bd.sample = i;
        for (const auto& l : d.lineages) {
            BundleLineage bl;
            bl.prevalence = l.prevalence;
            for (int p : l.path) bl.path.push_back(net.nodes[static_cast<std::size_t>(p)].id);
            bd.lineages.push_back(std::move(bl));
        }
        t.decompositions.push_back(std::move(bd));
    }
    return t;
}

}  // namespace

ResultBundle run_pipeline(const RunConfig& cfg, const SnvTable& table,
                          const std::optional<std::vector<Cluster>>& given) {
    cfg.validate();
    table.samples.validate();
    const std::size_t S = table.samples.size();
    for (const auto& s : table.snvs) {
        if (s.vaf.size() != S) throw std::invalid_argument("SSNV value count does not match sample count");
    }

    ResultBundle b;
    b.config = config_to_json(cfg);
    if (cfg.timestamp) b.timestamp = utc_now();
    b.samples = table.samples;
    for (const auto& s : table.snvs) b.snvs.push_back({s, std::nullopt, std::nullopt});

    std::vector<Cluster> clusters;
    if (given) {
        clusters = *given;
        std::vector<bool> listed(table.snvs.size(), false);
        for (const auto& c : clusters) {
            for (std::size_t m : c.members) {
                listed.at(m) = true;
                b.snvs[m].profile = c.profile;
            }
        }
        for (std::size_t i = 0; i < listed.size(); ++i) {
            if (!listed[i]) b.dropped.push_back({i, "not listed in clusters file"});
        }
    } else {
        CallingConfig calling = cfg.calling;
        calling.normal_index = table.samples.normal_index;
        const GroupingResult grouping = group_snvs(table.snvs, calling);
        b.dropped = grouping.dropped;
        int next_id = 1;
        for (const auto& g : grouping.groups) {
            for (std::size_t m : g.members) b.snvs[m].profile = g.profile;
            for (auto& c : cluster_group(g, table.snvs, cfg.clustering)) {
                c.id = next_id++;
                clusters.push_back(std::move(c));
            }
        }
    }

    std::vector<Cluster> unsupported;
    const std::vector<Cluster> kept = filter_by_support(clusters, cfg.network, &unsupported);
    for (const auto& c : unsupported) {
        for (std::size_t m : c.members) {
            b.dropped.push_back({m, "node support below " + std::to_string(cfg.network.min_node_support)});
        }
    }

    ConstraintNetwork net = build_network(kept, S, cfg.network);
    std::vector<RankedTree> ranked;
    if (kept.empty()) {
        b.diagnostic = "no SSNV cluster reached the network";
    } else {
        while (true) {
            const SearchResult sr = enumerate_trees(net, cfg.search);
            b.trees_found = sr.trees.size();
            b.truncated = sr.truncated;
            b.grow_calls += sr.grow_calls;
            ranked = rank_trees(net, sr.trees, cfg.qp_epsilon, cfg.qp_batch);
            if (!ranked.empty()) break;
            auto adj = adjust_network(net, cfg.network);
            if (!adj) {
                b.diagnostic = "no valid tree: network adjustment exhausted";
                break;
            }
            b.adjustments.push_back({adj->removed.id, adj->removed.members});
            for (std::size_t m : adj->removed.members) b.dropped.push_back({m, "removed by network adjustment"});
            net = std::move(adj->network);
        }
    }

    for (const auto& n : net.nodes) {
        BundleNode bn;
        bn.id = n.id;
        bn.root = n.is_root;
        bn.profile = n.profile();
        bn.level = n.level;
        bn.robust = n.cluster.robust;
        bn.snvs = n.cluster.members;
        bn.centroid = n.full_centroid;
        bn.stderr_ = n.full_stderr;
        for (std::size_t m : bn.snvs) b.snvs[m].node = n.id;
        b.nodes.push_back(std::move(bn));
    }
    for (const auto& e : net.edges) {
        b.network_edges.push_back(
            {net.nodes[static_cast<std::size_t>(e.parent)].id, net.nodes[static_cast<std::size_t>(e.child)].id});
    }
    std::sort(b.network_edges.begin(), b.network_edges.end());
    std::sort(b.dropped.begin(), b.dropped.end(),
              [](const DroppedSnv& x, const DroppedSnv& y) { return x.index < y.index; });

    b.trees_valid = ranked.size();
    const std::size_t keep = std::min(cfg.num_save, ranked.size());
    for (std::size_t r = 0; r < keep; ++r) b.trees.push_back(to_bundle_tree(net, ranked[r], table.samples));
    return b;
}

std::string check_snv_accounting(const ResultBundle& b) {
    std::vector<int> seen(b.snvs.size(), 0);
    for (const auto& n : b.nodes) {
        for (std::size_t m : n.snvs) {
            if (m >= seen.size()) return "node " + std::to_string(n.id) + " lists unknown SSNV " + std::to_string(m);
            ++seen[m];
        }
    }
    for (const auto& d : b.dropped) {
        if (d.index >= seen.size()) return "dropped list names unknown SSNV " + std::to_string(d.index);
        if (d.reason.empty()) return "SSNV " + std::to_string(d.index) + " dropped without a reason";
        ++seen[d.index];
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] != 1) return "SSNV " + std::to_string(i) + " accounted " + std::to_string(seen[i]) + " times";
    }
    return {};
}

}  // namespace lichee
