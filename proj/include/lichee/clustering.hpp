#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lichee/calling.hpp"
#include "lichee/core.hpp"
#include "lichee/random.hpp"

namespace lichee {

struct ClusteringConfig {
    int max_components = 5;
    int min_cluster_size = 2;
    int min_private_cluster_size = 1;
    double collapse_distance = 0.1;
    int em_max_iters = 200;
    double em_tol = 1e-6;
    int em_restarts = 3;
    std::uint64_t seed = 1;

    void validate() const;
};

/// VAFs of one group's members restricted to the group's present samples.
struct GroupVafMatrix {
    BinaryProfile profile;
    std::vector<std::size_t> members;
    std::vector<std::vector<double>> rows;  // n x s
    bool robust = true;

    static GroupVafMatrix from_group(const SnvGroup& group, const std::vector<SnvRecord>& snvs);
    std::size_t dims() const { return rows.empty() ? 0 : rows.front().size(); }
};

inline constexpr double kVarianceFloor = 1e-5;

/// Diagonal-covariance Gaussian mixture.
struct GaussianMixture {
    std::vector<double> weights;
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> variances;
    double log_likelihood = 0.0;
    std::vector<double> trace;  // log-likelihood after every E-step
    int iterations = 0;

    std::size_t components() const { return weights.size(); }
    /// Responsibilities of each component for `x`, normalized.
    std::vector<double> responsibilities(const std::vector<double>& x) const;
};

/// One EM run for `k` components with k-means++ seeding from `rng`.
GaussianMixture fit_mixture(const std::vector<std::vector<double>>& data, int k,
                            const ClusteringConfig& cfg, Engine& rng);

double bic(const GaussianMixture& model, std::size_t n);

/// Chooses K by BIC and returns one cluster per non-empty component.
/// Cluster ids are local (0..), in order of each cluster's first member.
std::vector<Cluster> fit_clusters(const GroupVafMatrix& m, const ClusteringConfig& cfg);

/// Absorbs undersized clusters into their nearest neighbour, then merges
/// pairs closer than `collapse_distance`, closest first.
std::vector<Cluster> prune_and_collapse(std::vector<Cluster> clusters,
                                        const std::vector<SnvRecord>& snvs,
                                        const ClusteringConfig& cfg);

/// fit_clusters followed by prune_and_collapse, for a single group.
std::vector<Cluster> cluster_group(const SnvGroup& group, const std::vector<SnvRecord>& snvs,
                                   const ClusteringConfig& cfg);

double centroid_distance(const Cluster& a, const Cluster& b);

}  // namespace lichee
