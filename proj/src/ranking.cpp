#include "lichee/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lichee/qp.hpp"

namespace lichee {

double local_score(const ConstraintNetwork& net, const CandidateTree& tree) {
    const auto kids = tree.children();
    double score = 0.0;
    for (std::size_t u = 0; u < kids.size(); ++u) {
        if (kids[u].empty()) continue;
        const auto& pc = net.nodes[u].full_centroid;
        for (std::size_t i = 0; i < pc.size(); ++i) {
            double sum = 0.0;
            for (int v : kids[u]) sum += net.nodes[static_cast<std::size_t>(v)].full_centroid[i];
            const double excess = sum - pc[i];
            if (excess > 0.0) score += excess * excess;
        }
    }
    return score;
}

QpSolution solve_qp(const ConstraintNetwork& net, const CandidateTree& tree, double eps) {
    if (tree.parent.size() != net.nodes.size()) throw std::invalid_argument("solve_qp: tree/network size mismatch");
    const std::size_t n = net.nodes.size();
    const std::size_t samples = net.samples;
    const auto kids = tree.children();

    QpSolution sol;
    sol.feasible = true;
    sol.deviations.assign(n, std::vector<double>(samples, 0.0));

    // The problem separates by sample.
    for (std::size_t i = 0; i < samples; ++i) {
        std::vector<int> var(n, -1);
        int nvars = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (net.nodes[v].present(i)) var[v] = nvars++;
        }
        std::vector<Eigen::VectorXd> rows;
        std::vector<double> rhs;
        for (std::size_t v = 0; v < n; ++v) {
            if (var[v] < 0) continue;
            const double c = net.nodes[v].full_centroid[i];
            Eigen::VectorXd lo = Eigen::VectorXd::Zero(nvars);
            lo[var[v]] = 1.0;
            rows.push_back(lo);
            rhs.push_back(-eps);
            Eigen::VectorXd hi = Eigen::VectorXd::Zero(nvars);
            hi[var[v]] = -1.0;
            rows.push_back(hi);
            rhs.push_back(-std::min(eps, c));
        }
        for (std::size_t u = 0; u < n; ++u) {
            if (kids[u].empty()) continue;
            // e_u - sum(e_v) >= sum(c_v) - c_u
            Eigen::VectorXd row = Eigen::VectorXd::Zero(nvars);
            double bound = -net.nodes[u].full_centroid[i];
            bool any_var = false;
            if (var[u] >= 0) {
                row[var[u]] = 1.0;
                any_var = true;
            }
            for (int v : kids[u]) {
                bound += net.nodes[static_cast<std::size_t>(v)].full_centroid[i];
                if (var[static_cast<std::size_t>(v)] >= 0) {
                    row[var[static_cast<std::size_t>(v)]] -= 1.0;
                    any_var = true;
                }
            }
            if (!any_var) {
                if (bound > 1e-12) sol.feasible = false;
                continue;
            }
            rows.push_back(row);
            rhs.push_back(bound);
        }
        if (!sol.feasible) break;
        if (nvars == 0) continue;
        Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), nvars);
        Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
            b[static_cast<Eigen::Index>(r)] = rhs[r];
        }
        const MinNormResult res = solve_min_norm(A, b);
        if (!res.feasible) {
            sol.feasible = false;
            break;
        }
        sol.kkt_residual = std::max(sol.kkt_residual, res.kkt_residual);
        for (std::size_t v = 0; v < n; ++v) {
            if (var[v] >= 0) sol.deviations[v][i] = res.x[var[v]];
        }
    }
    if (!sol.feasible) {
        sol.objective = 0.0;
        sol.deviations.assign(n, std::vector<double>(samples, 0.0));
        sol.kkt_residual = 0.0;
        return sol;
    }
    sol.objective = 0.0;
    for (const auto& row : sol.deviations) {
        for (double e : row) sol.objective += e * e;
    }
    return sol;
}

std::vector<RankedTree> rank_trees(const ConstraintNetwork& net, std::vector<CandidateTree> trees, double eps,
                                   std::size_t k) {
    if (k == 0) k = 1;
    std::vector<RankedTree> all;
    all.reserve(trees.size());
    for (auto& t : trees) {
        RankedTree r;
        r.local_score = local_score(net, t);
        r.tree = std::move(t);
        all.push_back(std::move(r));
    }
    std::sort(all.begin(), all.end(), [](const RankedTree& a, const RankedTree& b) {
        if (a.local_score != b.local_score) return a.local_score < b.local_score;
        return a.tree < b.tree;
    });

    std::vector<RankedTree> solved;
    std::vector<bool> dropped(all.size(), false);
    std::size_t next = 0;
    while (next < all.size() && solved.empty()) {
        const std::size_t end = std::min(all.size(), next + k);
        for (std::size_t j = next; j < end; ++j) {
            QpSolution qp = solve_qp(net, all[j].tree, eps);
            if (qp.feasible) {
                all[j].qp = std::move(qp);
                solved.push_back(all[j]);
            }
            dropped[j] = true;  // moved to `solved` or infeasible
        }
        next = end;
    }
    std::sort(solved.begin(), solved.end(), [](const RankedTree& a, const RankedTree& b) {
        if (a.qp->objective != b.qp->objective) return a.qp->objective < b.qp->objective;
        if (a.local_score != b.local_score) return a.local_score < b.local_score;
        return a.tree < b.tree;
    });
    std::vector<RankedTree> out = std::move(solved);
    for (std::size_t j = 0; j < all.size(); ++j) {
        if (!dropped[j]) out.push_back(std::move(all[j]));
    }
    for (std::size_t r = 0; r < out.size(); ++r) out[r].rank = static_cast<int>(r) + 1;
    return out;
}

SampleDecomposition decompose_sample(const ConstraintNetwork& net, const RankedTree& tree, std::size_t sample) {
    if (sample >= net.samples) throw std::out_of_range("decompose_sample: sample index out of range");
    const auto kids = tree.tree.children();
    const std::size_t n = net.nodes.size();
    std::vector<double> value(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        value[v] = net.nodes[v].full_centroid[sample];
        if (tree.qp && tree.qp->feasible && net.nodes[v].present(sample)) value[v] += tree.qp->deviations[v][sample];
    }

    SampleDecomposition out;
    out.sample = sample;
    std::vector<int> path;
    // Depth-first from the germline root, children in position order.
    auto visit = [&](auto&& self, int u) -> void {
        path.push_back(u);
        std::vector<int> ordered = kids[static_cast<std::size_t>(u)];
        std::sort(ordered.begin(), ordered.end());
        double present_children = 0.0;
        bool has_present_child = false;
        for (int v : ordered) {
            if (net.nodes[static_cast<std::size_t>(v)].present(sample)) {
                present_children += value[static_cast<std::size_t>(v)];
                has_present_child = true;
            }
        }
        const auto& node = net.nodes[static_cast<std::size_t>(u)];
        if (!node.is_root && node.present(sample)) {
            const double residual = value[static_cast<std::size_t>(u)] - present_children;
            if (!has_present_child || residual > 1e-9) {
                out.lineages.push_back({path, std::max(0.0, residual)});
            }
        }
        for (int v : ordered) {
            if (net.nodes[static_cast<std::size_t>(v)].present(sample)) self(self, v);
        }
        path.pop_back();
    };
    visit(visit, ConstraintNetwork::kRoot);
    return out;
}

}  // namespace lichee
