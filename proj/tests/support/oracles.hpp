#pragma once

// Independent reference implementations used only by the tests. They share
// no code with the library beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "lichee/core.hpp"
#include "lichee/network.hpp"
#include "lichee/search.hpp"

namespace oracle {

// Children-sum check over a whole parent array, straight from the
// definition: every node's children sum to at most its centroid plus eps.
inline bool children_sums_hold(const lichee::ConstraintNetwork& net, const std::vector<int>& parent, double eps) {
    const std::size_t n = net.nodes.size();
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t i = 0; i < net.samples; ++i) {
            double sum = 0.0;
            bool any = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (parent[v] == static_cast<int>(u)) {
                    sum += net.nodes[v].full_centroid[i];
                    any = true;
                }
            }
            if (any && sum > net.nodes[u].full_centroid[i] + eps) return false;
        }
    }
    return true;
}

// All spanning arborescences rooted at node 0 that use only network edges,
// by trying every combination of one incoming edge per non-root node and
// keeping the acyclic ones, then filtering by the children-sum check.
inline std::set<std::vector<int>> brute_force_trees(const lichee::ConstraintNetwork& net, double eps) {
    const std::size_t n = net.nodes.size();
    std::vector<std::vector<int>> in(n);
    for (const auto& e : net.edges) in[static_cast<std::size_t>(e.child)].push_back(e.parent);
    std::set<std::vector<int>> out;
    std::vector<int> parent(n, -1);
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (v == n) {
            for (std::size_t x = 1; x < n; ++x) {
                std::size_t cur = x;
                std::size_t steps = 0;
                while (cur != 0) {
                    cur = static_cast<std::size_t>(parent[cur]);
                    if (++steps > n) return;  // cycle
                }
            }
            if (children_sums_hold(net, parent, eps)) out.insert(parent);
            return;
        }
        for (int p : in[v]) {
            parent[v] = p;
            rec(v + 1);
        }
        parent[v] = -1;
    };
    if (n == 1) {
        out.insert(parent);
        return out;
    }
    rec(1);
    return out;
}

struct GridQp {
    bool feasible = false;
    double objective = 0.0;
};

// Minimum of sum e^2 over a grid of step `step`, by dynamic programming
// over the tree. Adjusted values a_v = c_v + e_v must satisfy
// a_u >= sum of the children's a, with e in [-eps, min(eps, c)]; nodes absent
// from a sample are pinned to 0. Centroids are expected to lie on the grid.
inline GridQp grid_qp(const lichee::ConstraintNetwork& net, const std::vector<int>& parent, double eps,
                      double step = 1e-3) {
    const std::size_t n = net.nodes.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> kids(n);
    for (std::size_t v = 0; v < n; ++v)
        if (parent[v] >= 0) kids[static_cast<std::size_t>(parent[v])].push_back(static_cast<int>(v));
    const auto units = [&](double x) { return static_cast<long>(std::llround(x / step)); };
    const long E = units(eps);

    GridQp total{true, 0.0};
    for (std::size_t i = 0; i < net.samples; ++i) {
        // f[v][k]: best subtree cost with a_v = lo[v] + k grid units.
        std::vector<long> lo(n), hi(n);
        std::vector<std::vector<double>> f(n);
        std::function<void(std::size_t)> solve = [&](std::size_t v) {
            for (int c : kids[v]) solve(static_cast<std::size_t>(c));
            const long c = units(net.nodes[v].full_centroid[i]);
            const bool present = net.nodes[v].present(i);
            lo[v] = present ? c - E : 0;
            hi[v] = present ? c + std::min(E, c) : 0;
            // g over the sum of the children's adjusted values.
            long glo = 0;
            std::vector<double> g{0.0};
            for (int ch : kids[v]) {
                const auto cu = static_cast<std::size_t>(ch);
                std::vector<double> next(g.size() + f[cu].size() - 1, kInf);
                for (std::size_t a = 0; a < g.size(); ++a) {
                    if (g[a] == kInf) continue;
                    for (std::size_t b = 0; b < f[cu].size(); ++b) {
                        if (f[cu][b] == kInf) continue;
                        next[a + b] = std::min(next[a + b], g[a] + f[cu][b]);
                    }
                }
                glo += lo[cu];
                g = std::move(next);
            }
            // prefix minimum: children may sum to anything up to a_v
            for (std::size_t s = 1; s < g.size(); ++s) g[s] = std::min(g[s], g[s - 1]);
            f[v].assign(static_cast<std::size_t>(hi[v] - lo[v] + 1), kInf);
            for (long a = lo[v]; a <= hi[v]; ++a) {
                const long idx = kids[v].empty() ? 0 : a - glo;  // leaves carry no sum constraint
                if (idx < 0) continue;
                const double best = g[static_cast<std::size_t>(std::min<long>(idx, static_cast<long>(g.size()) - 1))];
                if (best == kInf) continue;
                const double e = static_cast<double>(a - (present ? c : 0)) * step;
                f[v][static_cast<std::size_t>(a - lo[v])] = best + e * e;
            }
        };
        solve(0);
        const double best = *std::min_element(f[0].begin(), f[0].end());
        if (best == kInf) return {false, 0.0};
        total.objective += best;
    }
    return total;
}

// Size of a minimum set of binary profiles such that every ternary profile
// is compatible with at least one of them (branch and bound).
inline std::size_t exhaustive_min_cover(const std::vector<lichee::TernaryProfile>& items) {
    std::vector<std::vector<lichee::BinaryProfile>> subs;
    for (const auto& t : items) subs.push_back(t.substitutions());
    std::size_t best = items.size();
    std::vector<lichee::BinaryProfile> chosen;
    std::function<void()> rec = [&] {
        if (chosen.size() >= best) return;
        std::optional<std::size_t> open;
        for (std::size_t k = 0; k < items.size() && !open; ++k) {
            bool hit = false;
            for (const auto& c : chosen) hit = hit || lichee::ternary_compatible(items[k], c);
            if (!hit) open = k;
        }
        if (!open) {
            best = chosen.size();
            return;
        }
        for (const auto& s : subs[*open]) {
            chosen.push_back(s);
            rec();
            chosen.pop_back();
        }
    };
    rec();
    return best;
}

inline double harmonic(std::size_t n) {
    double h = 0.0;
    for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
    return h;
}

}  // namespace oracle
