#include "common.hpp"

namespace rebalance {
namespace {

// Shared body of SMOTE and Gaussian SMOTE; only the gap distribution differs.
template <class GapFn>
SyntheticBatch smote_like(const Dataset& ds, Label label, std::size_t n_to_add, const SamplerConfig& cfg,
                          std::string_view id, GapFn&& gap_fn) {
    const auto split = detail::split_classes(ds, label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, label, split, n_to_add, cfg, id);

    const Matrix points = detail::gather_rows(ds.features(), split.minority);
    const auto ids = detail::gather_ids(ds, split.minority);
    const std::size_t k = detail::clamp_k(cfg.k, ids.size());
    const NeighborModel model(points, ids, cfg.search);
    const auto neighbors = knn_query(model, points, ids, k);

    auto plan = detail::plan_stream(cfg, id, label);
    const auto counts = detail::uniform_counts(ids.size(), n_to_add, plan);
    return detail::generate(ds.cols(), label, ids, counts, cfg, id,
                            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                                const auto tail = neighbors[slot].tail(k);
                                const Neighbor& nb = tail[rng.index(tail.size())];
                                detail::interpolate(points, slot, nb.index, gap_fn(rng), out);
                                prov = {ids[slot], nb.row_id, std::string(id)};
                            });
}

}  // namespace

SyntheticBatch smote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    return smote_like(ds, minority_label, n_to_add, cfg, "smote", [](RandomStream& rng) { return rng.uniform(); });
}

SyntheticBatch gaussian_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                              const SamplerConfig& cfg) {
    const double sigma = cfg.sigma;
    return smote_like(ds, minority_label, n_to_add, cfg, "gaussian_smote",
                      [sigma](RandomStream& rng) { return rng.normal(0.0, sigma); });
}

}  // namespace rebalance
