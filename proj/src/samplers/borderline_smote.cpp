#include "common.hpp"
#include "rebalance/error.hpp"

namespace rebalance {
namespace {

constexpr std::string_view kId = "borderline_smote";

// Positions (into ds) of minority rows in danger.
std::vector<std::size_t> danger_rows(const Dataset& ds, Label label, const detail::ClassSplit& split,
                                     const SamplerConfig& cfg) {
    const std::size_t k = detail::clamp_k(cfg.k, ds.rows());
    const NeighborModel model(ds, cfg.search);
    const Matrix points = detail::gather_rows(ds.features(), split.minority);
    const auto neighbors = knn_query(model, points, detail::gather_ids(ds, split.minority), k);
    std::vector<std::size_t> danger;
    for (std::size_t i = 0; i < split.minority.size(); ++i) {
        std::size_t majority = 0;
        for (const auto& nb : neighbors[i].tail(k)) majority += ds.label(nb.index) != label;
        if (2 * majority >= k && majority < k) danger.push_back(split.minority[i]);
    }
    return danger;
}

}  // namespace

std::vector<RowId> borderline_danger_set(const Dataset& ds, Label minority_label, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    return detail::gather_ids(ds, danger_rows(ds, minority_label, split, cfg));
}

SyntheticBatch borderline_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                                const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const auto danger = danger_rows(ds, minority_label, split, cfg);
    if (danger.empty()) throw EmptySeedSet(std::string(kId));

    const Matrix points = detail::gather_rows(ds.features(), split.minority);
    const auto ids = detail::gather_ids(ds, split.minority);
    const std::size_t k = detail::clamp_k(cfg.k, ids.size());
    const NeighborModel model(points, ids, cfg.search);
    const Matrix danger_points = detail::gather_rows(ds.features(), danger);
    const auto danger_ids = detail::gather_ids(ds, danger);
    const auto neighbors = knn_query(model, danger_points, danger_ids, k);

    auto plan = detail::plan_stream(cfg, kId, minority_label);
    const auto counts = detail::uniform_counts(danger.size(), n_to_add, plan);
    return detail::generate(ds.cols(), minority_label, danger_ids, counts, cfg, kId,
                            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                                const auto tail = neighbors[slot].tail(k);
                                const Neighbor& nb = tail[rng.index(tail.size())];
                                detail::interpolate(ds.features(), danger[slot], split.minority[nb.index],
                                                    rng.uniform(), out);
                                prov = {danger_ids[slot], nb.row_id, std::string(kId)};
                            });
}

}  // namespace rebalance
