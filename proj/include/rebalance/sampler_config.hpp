#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rebalance/neighbors.hpp"

namespace rebalance {

/// Every sampler hyperparameter plus the seed. One value drives any sampler.
struct SamplerConfig {
    std::size_t k = 5;
    std::size_t k1 = 5;
    std::size_t k2 = 5;
    std::size_t k3 = 5;
    std::size_t cluster_k = 5;
    std::size_t mwmote_cluster_k = 10;
    double sigma = 0.5;
    double energy = 1.0;
    double c_max_ratio = 0.25;
    std::size_t radius_neighbor_cap = 100;
    double imbalance_threshold_irt = 10.0;
    std::optional<double> density_exponent_de;  ///< unset: feature count
    double mwmote_cmax = 3.0;
    double mwmote_cf_th = 50.0;
    std::size_t nras_threshold = 3;
    std::optional<double> nras_propensity_floor;  ///< unset: no propensity filter
    double rbo_gamma = 1.0;
    std::size_t rbo_iterations = 1;
    double rbo_step_size = 0.01;
    double rbo_stop_probability = 1.0;
    double safe_level_correction_rate = 0.05;
    double beta = 1.0;
    std::size_t kmeans_max_iterations = 20;
    SearchStrategy search = SearchStrategy::metric_tree;
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

}  // namespace rebalance
