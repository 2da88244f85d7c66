#include "rebalance/sampler_config.hpp"

#include <cmath>
#include <string>

#include "rebalance/error.hpp"

namespace rebalance {
namespace {

void require(bool ok, const char* field, const char* rule) {
    if (!ok) throw ConfigError(std::string(field) + " must be " + rule);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool rate(double v) { return v > 0.0 && v <= 1.0; }

}  // namespace

void SamplerConfig::validate() const {
    require(k >= 1, "k", "at least 1");
    require(k1 >= 1, "k1", "at least 1");
    require(k2 >= 1, "k2", "at least 1");
    require(k3 >= 1, "k3", "at least 1");
    require(cluster_k >= 1, "cluster_k", "at least 1");
    require(mwmote_cluster_k >= 1, "mwmote_cluster_k", "at least 1");
    require(std::isfinite(sigma) && sigma >= 0.0, "sigma", "non-negative");
    require(positive(energy), "energy", "positive");
    require(rate(c_max_ratio), "c_max_ratio", "in (0, 1]");
    require(radius_neighbor_cap >= 1, "radius_neighbor_cap", "at least 1");
    require(positive(imbalance_threshold_irt), "imbalance_threshold_irt", "positive");
    require(!density_exponent_de || positive(*density_exponent_de), "density_exponent_de", "positive");
    require(positive(mwmote_cmax), "mwmote_cmax", "positive");
    require(positive(mwmote_cf_th), "mwmote_cf_th", "positive");
    require(nras_threshold >= 1, "nras_threshold", "at least 1");
    require(!nras_propensity_floor || (*nras_propensity_floor >= 0.0 && *nras_propensity_floor <= 1.0),
            "nras_propensity_floor", "in [0, 1]");
    require(positive(rbo_gamma), "rbo_gamma", "positive");
    require(positive(rbo_step_size), "rbo_step_size", "positive");
    require(rate(rbo_stop_probability), "rbo_stop_probability", "in (0, 1]");
    require(rate(safe_level_correction_rate), "safe_level_correction_rate", "in (0, 1]");
    require(positive(beta), "beta", "positive");
    require(kmeans_max_iterations >= 1, "kmeans_max_iterations", "at least 1");
}

}  // namespace rebalance
