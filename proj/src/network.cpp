#include "lichee/network.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace lichee {

void NetworkConfig::validate() const {
    if (epsilon_edge < 0.0) throw std::invalid_argument("epsilon_edge must be >= 0");
    if (!(root_vaf > 0.0 && root_vaf <= 1.0)) throw std::invalid_argument("root_vaf must be in (0,1]");
}

NetworkNode NetworkNode::root(std::size_t samples, double root_vaf) {
    NetworkNode n;
    n.id = 0;
    n.is_root = true;
    n.cluster.id = 0;
    n.cluster.profile = BinaryProfile::all_ones(samples);
    n.cluster.centroid.assign(samples, root_vaf);
    n.cluster.standard_error.assign(samples, 0.0);
    n.level = samples;
    n.full_centroid.assign(samples, root_vaf);
    n.full_stderr.assign(samples, 0.0);
    return n;
}

NetworkNode NetworkNode::from_cluster(const Cluster& c) {
    NetworkNode n;
    n.id = c.id;
    n.cluster = c;
    n.level = hamming_weight(c.profile);
    n.full_centroid = c.full_centroid();
    n.full_stderr = c.full_standard_error();
    return n;
}

std::vector<std::vector<int>> ConstraintNetwork::parents() const {
    std::vector<std::vector<int>> out(nodes.size());
    for (const auto& e : edges) out[static_cast<std::size_t>(e.child)].push_back(e.parent);
    return out;
}

std::vector<std::vector<int>> ConstraintNetwork::children() const {
    std::vector<std::vector<int>> out(nodes.size());
    for (const auto& e : edges) out[static_cast<std::size_t>(e.parent)].push_back(e.child);
    return out;
}

bool ConstraintNetwork::has_edge(int parent, int child) const {
    return std::binary_search(edges.begin(), edges.end(), Edge{parent, child});
}

int ConstraintNetwork::index_of(int id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

double edge_margin(const NetworkNode& u, const NetworkNode& v, std::size_t sample, const NetworkConfig& cfg) {
    return std::max(u.full_stderr.at(sample) + v.full_stderr.at(sample), cfg.epsilon_edge);
}

bool admits_edge(const NetworkNode& u, const NetworkNode& v, const NetworkConfig& cfg) {
    const std::size_t s = u.full_centroid.size();
    if (v.full_centroid.size() != s) throw std::invalid_argument("admits_edge: sample count mismatch");
    for (std::size_t i = 0; i < s; ++i) {
        if (!u.present(i) && v.present(i)) return false;
        if (u.full_centroid[i] < v.full_centroid[i] - edge_margin(u, v, i, cfg)) return false;
    }
    return true;
}

double vaf_error(const NetworkNode& parent, const NetworkNode& child) {
    double err = 0.0;
    for (std::size_t i = 0; i < parent.full_centroid.size(); ++i) {
        const double d = child.full_centroid[i] - parent.full_centroid[i];
        if (d > 0.0) err += d * d;
    }
    return err;
}

std::pair<const NetworkNode*, const NetworkNode*> orient_same_level(const NetworkNode& u, const NetworkNode& v) {
    const double uv = vaf_error(u, v);
    const double vu = vaf_error(v, u);
    // errors within rounding noise of each other count as a tie
    const double tol = 1e-12 * std::max({uv, vu, 1e-300});
    if (uv < vu - tol || (std::abs(uv - vu) <= tol && u.id <= v.id)) return {&u, &v};
    return {&v, &u};
}

std::vector<Cluster> filter_by_support(const std::vector<Cluster>& clusters, const NetworkConfig& cfg,
                                       std::vector<Cluster>* removed) {
    std::vector<Cluster> kept;
    for (const auto& c : clusters) {
        if (c.members.size() >= cfg.min_node_support) {
            kept.push_back(c);
        } else if (removed) {
            removed->push_back(c);
        }
    }
    return kept;
}

namespace {

bool reaches(const std::vector<std::vector<int>>& adj, int from, int to) {
    std::vector<int> stack{from};
    std::vector<bool> seen(adj.size(), false);
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        if (x == to) return true;
        if (seen[static_cast<std::size_t>(x)]) continue;
        seen[static_cast<std::size_t>(x)] = true;
        for (int y : adj[static_cast<std::size_t>(x)]) stack.push_back(y);
    }
    return false;
}

}  // namespace

ConstraintNetwork build_network(const std::vector<Cluster>& clusters, std::size_t samples,
                                const NetworkConfig& cfg) {
    cfg.validate();
    ConstraintNetwork net;
    net.samples = samples;
    net.nodes.push_back(NetworkNode::root(samples, cfg.root_vaf));
    std::vector<NetworkNode> body;
    for (const auto& c : clusters) {
        if (c.profile.size() != samples) throw std::invalid_argument("cluster profile length mismatch");
        if (c.id == 0) throw std::invalid_argument("cluster id 0 is reserved for the root");
        c.validate();
        body.push_back(NetworkNode::from_cluster(c));
    }
    std::sort(body.begin(), body.end(), [](const NetworkNode& a, const NetworkNode& b) {
        if (a.level != b.level) return a.level > b.level;
        return a.id < b.id;
    });
    for (auto& n : body) net.nodes.push_back(std::move(n));

    const int count = static_cast<int>(net.nodes.size());
    std::vector<std::vector<int>> adj(net.nodes.size());
    std::vector<Edge> edges;
    for (int a = 1; a < count; ++a) {
        for (int b = 1; b < count; ++b) {
            if (a == b) continue;
            const auto& u = net.nodes[static_cast<std::size_t>(a)];
            const auto& v = net.nodes[static_cast<std::size_t>(b)];
            if (u.level > v.level) {
                if (covers(u.profile(), v.profile()) && admits_edge(u, v, cfg)) {
                    edges.push_back({a, b});
                    adj[static_cast<std::size_t>(a)].push_back(b);
                }
            }
        }
    }
    // Same-profile pairs: one orientation at most, skipping any edge that
    // would close a cycle among the same-level edges added so far.
    for (int a = 1; a < count; ++a) {
        for (int b = a + 1; b < count; ++b) {
            const auto& u = net.nodes[static_cast<std::size_t>(a)];
            const auto& v = net.nodes[static_cast<std::size_t>(b)];
            if (u.level != v.level || u.profile() != v.profile()) continue;
            const auto [p, c] = orient_same_level(u, v);
            if (!admits_edge(*p, *c, cfg)) continue;
            const int pi = p == &u ? a : b;
            const int ci = p == &u ? b : a;
            if (reaches(adj, ci, pi)) continue;
            edges.push_back({pi, ci});
            adj[static_cast<std::size_t>(pi)].push_back(ci);
        }
    }

    if (cfg.constrain_private) {
        std::vector<std::size_t> closest(net.nodes.size(), samples + 1);
        for (const auto& e : edges) {
            const auto& child = net.nodes[static_cast<std::size_t>(e.child)];
            if (child.level != 1) continue;
            closest[static_cast<std::size_t>(e.child)] =
                std::min(closest[static_cast<std::size_t>(e.child)], net.nodes[static_cast<std::size_t>(e.parent)].level);
        }
        std::erase_if(edges, [&](const Edge& e) {
            const auto& child = net.nodes[static_cast<std::size_t>(e.child)];
            return child.level == 1 && net.nodes[static_cast<std::size_t>(e.parent)].level != closest[static_cast<std::size_t>(e.child)];
        });
    }

    std::vector<bool> has_parent(net.nodes.size(), false);
    for (const auto& e : edges) has_parent[static_cast<std::size_t>(e.child)] = true;
    for (int v = 1; v < count; ++v) {
        const bool constrained = cfg.constrain_private && net.nodes[static_cast<std::size_t>(v)].level == 1;
        if (!has_parent[static_cast<std::size_t>(v)] || (cfg.root_to_all && !constrained))
            edges.push_back({ConstraintNetwork::kRoot, v});
    }
    std::sort(edges.begin(), edges.end());
    net.edges = std::move(edges);
    return net;
}

std::optional<Adjustment> adjust_network(const ConstraintNetwork& net, const NetworkConfig& cfg) {
    int pick = -1;
    for (int i = 1; i < static_cast<int>(net.nodes.size()); ++i) {
        const auto& n = net.nodes[static_cast<std::size_t>(i)];
        if (n.cluster.robust) continue;
        if (pick < 0) {
            pick = i;
            continue;
        }
        const auto& b = net.nodes[static_cast<std::size_t>(pick)];
        const auto key = [](const NetworkNode& x) { return std::tuple(x.size(), x.level, x.id); };
        if (key(n) < key(b)) pick = i;
    }
    if (pick < 0) return std::nullopt;
    std::vector<Cluster> remaining;
    for (int i = 1; i < static_cast<int>(net.nodes.size()); ++i) {
        if (i != pick) remaining.push_back(net.nodes[static_cast<std::size_t>(i)].cluster);
    }
    Adjustment out{build_network(remaining, net.samples, cfg), net.nodes[static_cast<std::size_t>(pick)].cluster};
    return out;
}

bool is_acyclic(const ConstraintNetwork& net) {
    std::vector<int> indegree(net.nodes.size(), 0);
    const auto kids = net.children();
    for (const auto& e : net.edges) ++indegree[static_cast<std::size_t>(e.child)];
    std::vector<int> ready;
    for (std::size_t i = 0; i < indegree.size(); ++i) {
        if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const int x = ready.back();
        ready.pop_back();
        ++visited;
        for (int y : kids[static_cast<std::size_t>(x)]) {
            if (--indegree[static_cast<std::size_t>(y)] == 0) ready.push_back(y);
        }
    }
    return visited == net.nodes.size();
}

}  // namespace lichee
