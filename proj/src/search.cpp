#include "lichee/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace lichee {

void SearchConfig::validate() const {
    if (epsilon_tree < 0.0) throw std::invalid_argument("epsilon_tree must be >= 0");
    if (max_trees < 1 || max_grow_calls < 1) throw std::invalid_argument("search bounds must be >= 1");
}

std::vector<Edge> CandidateTree::edges() const {
    std::vector<Edge> out;
    for (std::size_t v = 0; v < parent.size(); ++v) {
        if (parent[v] >= 0) out.push_back({parent[v], static_cast<int>(v)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> CandidateTree::children() const {
    std::vector<std::vector<int>> out(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v) {
        if (parent[v] >= 0) out[static_cast<std::size_t>(parent[v])].push_back(static_cast<int>(v));
    }
    return out;
}

bool local_sum_ok(const ConstraintNetwork& net, const std::vector<std::vector<int>>& children, int u,
                  const SearchConfig& cfg) {
    const auto& kids = children[static_cast<std::size_t>(u)];
    if (kids.empty()) return true;
    std::vector<int> sorted = kids;
    std::sort(sorted.begin(), sorted.end());
    const auto& pc = net.nodes[static_cast<std::size_t>(u)].full_centroid;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        double sum = 0.0;
        for (int v : sorted) sum += net.nodes[static_cast<std::size_t>(v)].full_centroid[i];
        if (sum > pc[i] + cfg.epsilon_tree) return false;
    }
    return true;
}

bool tree_sum_ok(const ConstraintNetwork& net, const CandidateTree& tree, const SearchConfig& cfg) {
    const auto kids = tree.children();
    for (std::size_t u = 0; u < kids.size(); ++u) {
        if (!local_sum_ok(net, kids, static_cast<int>(u), cfg)) return false;
    }
    return true;
}

namespace {

class TreeSearch {
public:
    TreeSearch(const ConstraintNetwork& net, const SearchConfig& cfg)
        : net_(net), cfg_(cfg), n_(net.nodes.size()) {
        out_.resize(n_);
        in_.resize(n_);
        for (std::size_t k = 0; k < net.edges.size(); ++k) {
            const auto& e = net.edges[k];
            out_[static_cast<std::size_t>(e.parent)].push_back(static_cast<int>(k));
            in_[static_cast<std::size_t>(e.child)].push_back(static_cast<int>(k));
        }
        alive_.assign(net.edges.size(), 1);
        in_tree_.assign(n_, 0);
        parent_.assign(n_, -1);
        children_.resize(n_);
    }

    SearchResult run() {
        in_tree_[ConstraintNetwork::kRoot] = 1;
        tree_nodes_ = 1;
        push_out_edges(ConstraintNetwork::kRoot);
        grow();
        return std::move(result_);
    }

private:
    // Frontier insertion order: child level descending, child id, parent id.
    auto key(int k) const {
        const auto& e = net_.edges[static_cast<std::size_t>(k)];
        const auto& c = net_.nodes[static_cast<std::size_t>(e.child)];
        const auto& p = net_.nodes[static_cast<std::size_t>(e.parent)];
        return std::tuple(-static_cast<long>(c.level), c.id, p.id);
    }

    std::size_t push_out_edges(int v) {
        std::vector<int> added;
        for (int k : out_[static_cast<std::size_t>(v)]) {
            const int w = net_.edges[static_cast<std::size_t>(k)].child;
            if (alive_[static_cast<std::size_t>(k)] && !in_tree_[static_cast<std::size_t>(w)]) added.push_back(k);
        }
        std::sort(added.begin(), added.end(), [this](int a, int b) { return key(a) < key(b); });
        frontier_.insert(frontier_.end(), added.begin(), added.end());
        return added.size();
    }

    // Whether `v` is reachable from the root over live edges.
    bool reachable(int v) {
        std::vector<char> seen(n_, 0);
        std::vector<int> stack{ConstraintNetwork::kRoot};
        seen[ConstraintNetwork::kRoot] = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            if (x == v) return true;
            for (int k : out_[static_cast<std::size_t>(x)]) {
                if (!alive_[static_cast<std::size_t>(k)]) continue;
                const int y = net_.edges[static_cast<std::size_t>(k)].child;
                if (!seen[static_cast<std::size_t>(y)]) {
                    seen[static_cast<std::size_t>(y)] = 1;
                    stack.push_back(y);
                }
            }
        }
        return false;
    }

    // Necessary condition for completing the current partial tree: every
    // outside node keeps a live in-edge whose parent can still take it, and
    // nodes left with a single in-tree option fit that parent together.
    bool dead_end() {
        // rounding allowance so the test never rejects what local_sum_ok accepts
        constexpr double kSlack = 1e-12;
        const std::size_t s = net_.samples;
        spare_.assign(n_ * s, 0.0);
        for (std::size_t u = 0; u < n_; ++u) {
            if (!in_tree_[u]) continue;
            const auto& pc = net_.nodes[u].full_centroid;
            for (std::size_t i = 0; i < s; ++i) spare_[u * s + i] = pc[i] + cfg_.epsilon_tree;
            for (int c : children_[u]) {
                const auto& cc = net_.nodes[static_cast<std::size_t>(c)].full_centroid;
                for (std::size_t i = 0; i < s; ++i) spare_[u * s + i] -= cc[i];
            }
        }
        forced_.assign(n_ * s, 0.0);
        for (std::size_t w = 0; w < n_; ++w) {
            if (in_tree_[w]) continue;
            const auto& wc = net_.nodes[w].full_centroid;
            int options = 0;
            int only = -1;
            for (int k : in_[w]) {
                if (!alive_[static_cast<std::size_t>(k)]) continue;
                const auto p = static_cast<std::size_t>(net_.edges[static_cast<std::size_t>(k)].parent);
                if (!in_tree_[p]) {
                    options = 2;  // an outside parent has no children yet
                    break;
                }
                bool fits = true;
                for (std::size_t i = 0; i < s && fits; ++i) fits = wc[i] <= spare_[p * s + i] + kSlack;
                if (fits) {
                    ++options;
                    only = static_cast<int>(p);
                }
            }
            if (options == 0) return true;
            if (options == 1) {
                const auto p = static_cast<std::size_t>(only);
                for (std::size_t i = 0; i < s; ++i) {
                    forced_[p * s + i] += wc[i];
                    if (forced_[p * s + i] > spare_[p * s + i] + kSlack) return true;
                }
            }
        }
        return false;
    }

    void grow() {
        if (++result_.grow_calls > cfg_.max_grow_calls) {
            stop_ = true;
            result_.truncated = true;
            return;
        }
        if (tree_nodes_ == n_) {
            result_.trees.push_back(CandidateTree{parent_});
            if (result_.trees.size() >= cfg_.max_trees) {
                stop_ = true;
                result_.truncated = true;
            }
            return;
        }
        std::vector<int> removed_stack;
        bool bridge = false;
        while (!bridge && !frontier_.empty()) {
            const int k = frontier_.back();
            frontier_.pop_back();
            const Edge e = net_.edges[static_cast<std::size_t>(k)];
            const int v = e.child;
            in_tree_[static_cast<std::size_t>(v)] = 1;
            parent_[static_cast<std::size_t>(v)] = e.parent;
            children_[static_cast<std::size_t>(e.parent)].push_back(v);
            ++tree_nodes_;

            if (local_sum_ok(net_, children_, e.parent, cfg_) && !dead_end()) {
                const std::size_t added = push_out_edges(v);
                // Edges into v leave the frontier; remember their slots.
                std::vector<std::pair<std::size_t, int>> into_v;
                std::size_t write = 0;
                for (std::size_t r = 0; r < frontier_.size(); ++r) {
                    const int f = frontier_[r];
                    if (net_.edges[static_cast<std::size_t>(f)].child == v) {
                        into_v.emplace_back(r, f);
                    } else {
                        frontier_[write++] = f;
                    }
                }
                frontier_.resize(write);

                grow();
                if (stop_) return;

                frontier_.resize(frontier_.size() - added);
                for (const auto& [pos, f] : into_v) {
                    frontier_.insert(frontier_.begin() + static_cast<std::ptrdiff_t>(pos), f);
                }
            }

            children_[static_cast<std::size_t>(e.parent)].pop_back();
            parent_[static_cast<std::size_t>(v)] = -1;
            in_tree_[static_cast<std::size_t>(v)] = 0;
            --tree_nodes_;
            alive_[static_cast<std::size_t>(k)] = 0;
            removed_stack.push_back(k);

            bridge = !reachable(v);
        }
        for (auto it = removed_stack.rbegin(); it != removed_stack.rend(); ++it) {
            frontier_.push_back(*it);
            alive_[static_cast<std::size_t>(*it)] = 1;
        }
    }

    const ConstraintNetwork& net_;
    const SearchConfig& cfg_;
    std::size_t n_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<char> alive_;
    std::vector<char> in_tree_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> frontier_;
    std::vector<double> spare_;
    std::vector<double> forced_;
    std::size_t tree_nodes_ = 0;
    bool stop_ = false;
    SearchResult result_;
};

}  // namespace

SearchResult enumerate_trees(const ConstraintNetwork& net, const SearchConfig& cfg) {
    cfg.validate();
    if (net.nodes.empty()) throw std::invalid_argument("enumerate_trees: empty network");
    if (!is_acyclic(net)) throw std::invalid_argument("enumerate_trees: network has a cycle");
    return TreeSearch(net, cfg).run();
}

}  // namespace lichee
