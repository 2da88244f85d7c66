#include <cmath>

#include "common.hpp"

namespace rebalance {
namespace {

constexpr std::string_view kId = "rbo";

double phi(const double* x, const Matrix& points, const std::vector<Label>& labels, Label minority, double gamma) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    double majority = 0.0;
    double min_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points.data() + i * d;
        double l1 = 0.0;
        for (std::size_t j = 0; j < d; ++j) l1 += std::abs(p[j] - x[j]);
        const double t = l1 / gamma;
        const double v = std::exp(-t * t);
        (labels[i] == minority ? min_value : majority) += v;
    }
    return majority - min_value;
}

std::size_t stop_index(const SamplerConfig& cfg, RandomStream& rng) {
    if (cfg.rbo_stop_probability == 1.0) return cfg.rbo_iterations;
    const double it = static_cast<double>(cfg.rbo_iterations);
    const double v = it * cfg.rbo_stop_probability + rng.normal(0.0, 1.0) * it * cfg.rbo_stop_probability;
    return v > 0.0 ? static_cast<std::size_t>(std::floor(v)) : 0;
}

}  // namespace

double rbo_phi(const RowVector& x, const Dataset& ds, Label minority_label, double gamma) {
    const RowVector copy = x;
    return phi(copy.data(), ds.features(), ds.labels(), minority_label, gamma);
}

SyntheticBatch rbo(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const auto ids = detail::gather_ids(ds, split.minority);
    auto plan = detail::plan_stream(cfg, kId, minority_label);
    const auto counts = detail::uniform_counts(ids.size(), n_to_add, plan);
    const std::size_t d = ds.cols();
    return detail::generate(
        d, minority_label, ids, counts, cfg, kId,
        [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
            detail::copy_row(ds.features(), split.minority[slot], out);
            double current = std::abs(phi(out, ds.features(), ds.labels(), minority_label, cfg.rbo_gamma));
            const std::size_t stop = stop_index(cfg, rng);
            std::vector<double> candidate(d);
            for (std::size_t it = 0; it < stop; ++it) {
                for (std::size_t j = 0; j < d; ++j) {
                    const double s = rng.sign();
                    candidate[j] = out[j] + s * rng.uniform() * cfg.rbo_step_size;
                }
                const double moved = std::abs(phi(candidate.data(), ds.features(), ds.labels(), minority_label,
                                                  cfg.rbo_gamma));
                if (moved < current) {
                    std::copy(candidate.begin(), candidate.end(), out);
                    current = moved;
                }
            }
            prov = {ids[slot], kNoPartner, std::string(kId)};
        });
}

}  // namespace rebalance
