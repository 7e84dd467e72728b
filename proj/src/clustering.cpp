#include "lichee/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lichee {

void ClusteringConfig::validate() const {
    if (max_components < 1) throw std::invalid_argument("max_components must be >= 1");
    if (collapse_distance < 0.0) throw std::invalid_argument("collapse_distance must be >= 0");
    if (em_max_iters < 1 || em_restarts < 1) throw std::invalid_argument("EM bounds must be >= 1");
}

GroupVafMatrix GroupVafMatrix::from_group(const SnvGroup& group, const std::vector<SnvRecord>& snvs) {
    GroupVafMatrix m;
    m.profile = group.profile;
    m.members = group.members;
    m.robust = group.robust;
    for (auto idx : group.members) {
        std::vector<double> row;
        const auto& vaf = snvs.at(idx).vaf;
        for (std::size_t i = 0; i < group.profile.size(); ++i) {
            if (group.profile[i]) row.push_back(vaf.at(i));
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

double log_sum_exp(const std::vector<double>& v) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : v) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s);
}

double log_density(const std::vector<double>& x, const std::vector<double>& mean,
                   const std::vector<double>& var) {
    double ll = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - mean[d];
        ll += -0.5 * (kLog2Pi + std::log(var[d]) + diff * diff / var[d]);
    }
    return ll;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
}

// Returns log-likelihood; fills `resp` (n x k) with normalized responsibilities.
double e_step(const std::vector<std::vector<double>>& data, const GaussianMixture& g,
              std::vector<std::vector<double>>& resp) {
    const std::size_t k = g.components();
    double total = 0.0;
    std::vector<double> lp(k);
    resp.assign(data.size(), std::vector<double>(k, 0.0));
    for (std::size_t n = 0; n < data.size(); ++n) {
        for (std::size_t c = 0; c < k; ++c) {
            lp[c] = g.weights[c] > 0.0 ? std::log(g.weights[c]) + log_density(data[n], g.means[c], g.variances[c])
                                       : -std::numeric_limits<double>::infinity();
        }
        const double norm = log_sum_exp(lp);
        total += norm;
        for (std::size_t c = 0; c < k; ++c) resp[n][c] = std::exp(lp[c] - norm);
    }
    return total;
}

void m_step(const std::vector<std::vector<double>>& data, const std::vector<std::vector<double>>& resp,
            GaussianMixture& g) {
    const std::size_t k = g.components();
    const std::size_t dims = data.front().size();
    const double n = static_cast<double>(data.size());
    for (std::size_t c = 0; c < k; ++c) {
        double nk = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) nk += resp[i][c];
        g.weights[c] = nk / n;
        if (nk < 1e-12) continue;  // empty component keeps its parameters
        for (std::size_t d = 0; d < dims; ++d) {
            double mu = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) mu += resp[i][c] * data[i][d];
            mu /= nk;
            double var = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) {
                const double diff = data[i][d] - mu;
                var += resp[i][c] * diff * diff;
            }
            g.means[c][d] = mu;
            g.variances[c][d] = std::max(var / nk, kVarianceFloor);
        }
    }
}

}  // namespace

std::vector<double> GaussianMixture::responsibilities(const std::vector<double>& x) const {
    std::vector<double> lp(components());
    for (std::size_t c = 0; c < components(); ++c) {
        lp[c] = weights[c] > 0.0 ? std::log(weights[c]) + log_density(x, means[c], variances[c])
                                 : -std::numeric_limits<double>::infinity();
    }
    const double norm = log_sum_exp(lp);
    for (double& v : lp) v = std::exp(v - norm);
    return lp;
}

GaussianMixture fit_mixture(const std::vector<std::vector<double>>& data, int k,
                            const ClusteringConfig& cfg, Engine& rng) {
    if (data.empty()) throw std::invalid_argument("fit_mixture: no data");
    if (k < 1 || static_cast<std::size_t>(k) > data.size()) {
        throw std::invalid_argument("fit_mixture: component count out of range");
    }
    const std::size_t dims = data.front().size();
    const std::size_t n = data.size();

    // k-means++ seeding
    std::vector<std::size_t> seeds{static_cast<std::size_t>(uniform_index(rng, n))};
    std::vector<double> d2(n);
    while (seeds.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (auto s : seeds) best = std::min(best, sq_dist(data[i], data[s]));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total <= 0.0) {
            pick = static_cast<std::size_t>(uniform_index(rng, n));
        } else {
            double r = uniform01(rng) * total;
            for (pick = 0; pick + 1 < n; ++pick) {
                r -= d2[pick];
                if (r < 0.0) break;
            }
        }
        seeds.push_back(pick);
    }

    std::vector<double> global_var(dims, 0.0);
    for (std::size_t d = 0; d < dims; ++d) {
        double mu = 0.0;
        for (const auto& row : data) mu += row[d];
        mu /= static_cast<double>(n);
        for (const auto& row : data) global_var[d] += (row[d] - mu) * (row[d] - mu);
        global_var[d] = std::max(global_var[d] / static_cast<double>(n) / k, kVarianceFloor);
    }

    GaussianMixture g;
    g.weights.assign(k, 1.0 / k);
    for (auto s : seeds) {
        g.means.push_back(data[s]);
        g.variances.push_back(global_var);
    }

    std::vector<std::vector<double>> resp;
    double prev = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.em_max_iters; ++it) {
        const double ll = e_step(data, g, resp);
        g.trace.push_back(ll);
        g.log_likelihood = ll;
        g.iterations = it + 1;
        if (ll - prev < cfg.em_tol) break;
        prev = ll;
        m_step(data, resp, g);
    }
    // The last M-step may not have been scored; rescore so the reported
    // likelihood matches the returned parameters.
    const double final_ll = e_step(data, g, resp);
    if (final_ll != g.log_likelihood) {
        g.trace.push_back(final_ll);
        g.log_likelihood = final_ll;
    }
    return g;
}

double bic(const GaussianMixture& model, std::size_t n) {
    const double k = static_cast<double>(model.components());
    const double dims = model.means.empty() ? 0.0 : static_cast<double>(model.means.front().size());
    const double params = k * 2.0 * dims + (k - 1.0);
    return -2.0 * model.log_likelihood + params * std::log(static_cast<double>(n));
}

namespace {

Cluster make_cluster(const GroupVafMatrix& m, std::vector<std::size_t> rows_in_cluster) {
    Cluster c;
    c.profile = m.profile;
    c.robust = m.robust;
    const std::size_t dims = m.dims();
    const double n = static_cast<double>(rows_in_cluster.size());
    for (std::size_t d = 0; d < dims; ++d) {
        double mu = 0.0;
        for (auto r : rows_in_cluster) mu += m.rows[r][d];
        mu /= n;
        double ss = 0.0;
        for (auto r : rows_in_cluster) ss += (m.rows[r][d] - mu) * (m.rows[r][d] - mu);
        const double sd = rows_in_cluster.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        c.centroid.push_back(mu);
        c.standard_error.push_back(sd / std::sqrt(n));
    }
    for (auto r : rows_in_cluster) c.members.push_back(m.members[r]);
    return c;
}

}  // namespace

std::vector<Cluster> fit_clusters(const GroupVafMatrix& m, const ClusteringConfig& cfg) {
    cfg.validate();
    const std::size_t n = m.rows.size();
    if (n == 0) throw std::invalid_argument("fit_clusters: empty group");
    if (n == 1) {
        Cluster c = make_cluster(m, {0});
        return {c};
    }
    Engine rng(derive_seed(cfg.seed, hash_key(m.profile.to_string())));
    const int kmax = std::min<int>(cfg.max_components, static_cast<int>(n));

    GaussianMixture best;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kmax; ++k) {
        GaussianMixture best_k;
        bool have = false;
        for (int r = 0; r < cfg.em_restarts; ++r) {
            GaussianMixture g = fit_mixture(m.rows, k, cfg, rng);
            if (!have || g.log_likelihood > best_k.log_likelihood) {
                best_k = std::move(g);
                have = true;
            }
            if (k == 1) break;  // single component is deterministic
        }
        const double score = bic(best_k, n);
        if (score < best_bic) {
            best_bic = score;
            best = std::move(best_k);
        }
    }

    std::vector<std::vector<std::size_t>> assigned(best.components());
    for (std::size_t r = 0; r < n; ++r) {
        const auto resp = best.responsibilities(m.rows[r]);
        const auto it = std::max_element(resp.begin(), resp.end());
        assigned[static_cast<std::size_t>(it - resp.begin())].push_back(r);
    }
    std::vector<std::vector<std::size_t>> nonempty;
    for (auto& a : assigned) {
        if (!a.empty()) nonempty.push_back(std::move(a));
    }
    std::sort(nonempty.begin(), nonempty.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<Cluster> out;
    for (auto& rows : nonempty) {
        out.push_back(make_cluster(m, std::move(rows)));
        out.back().id = static_cast<int>(out.size()) - 1;
    }
    return out;
}

double centroid_distance(const Cluster& a, const Cluster& b) {
    return std::sqrt(sq_dist(a.centroid, b.centroid));
}

namespace {

void merge_into(Cluster& target, const Cluster& source, const std::vector<SnvRecord>& snvs) {
    target.members.insert(target.members.end(), source.members.begin(), source.members.end());
    std::sort(target.members.begin(), target.members.end());
    target.robust = target.robust && source.robust;
    target.id = std::min(target.id, source.id);
    recompute_statistics(target, snvs);
}

std::size_t min_size_for(const Cluster& c, const ClusteringConfig& cfg) {
    const int m = hamming_weight(c.profile) == 1 ? cfg.min_private_cluster_size : cfg.min_cluster_size;
    return static_cast<std::size_t>(std::max(m, 0));
}

}  // namespace

std::vector<Cluster> prune_and_collapse(std::vector<Cluster> clusters, const std::vector<SnvRecord>& snvs,
                                        const ClusteringConfig& cfg) {
    while (clusters.size() > 1) {
        std::size_t small = clusters.size();
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (clusters[i].members.size() >= min_size_for(clusters[i], cfg)) continue;
            if (small == clusters.size() || clusters[i].members.size() < clusters[small].members.size()) {
                small = i;
            }
        }
        if (small == clusters.size()) break;
        std::size_t nearest = clusters.size();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < clusters.size(); ++j) {
            if (j == small) continue;
            const double d = centroid_distance(clusters[small], clusters[j]);
            if (d < best) {
                best = d;
                nearest = j;
            }
        }
        merge_into(clusters[nearest], clusters[small], snvs);
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(small));
    }

    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        std::size_t bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const double d = centroid_distance(clusters[i], clusters[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!(best < cfg.collapse_distance)) break;
        merge_into(clusters[bi], clusters[bj], snvs);
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return clusters;
}

std::vector<Cluster> cluster_group(const SnvGroup& group, const std::vector<SnvRecord>& snvs,
                                   const ClusteringConfig& cfg) {
    const auto matrix = GroupVafMatrix::from_group(group, snvs);
    return prune_and_collapse(fit_clusters(matrix, cfg), snvs, cfg);
}

}  // namespace lichee
