#include "common.hpp"
#include "rebalance/error.hpp"
#include "rebalance/propensity.hpp"

namespace rebalance {
namespace {

constexpr std::string_view kId = "nras";

// Positions (into ds) of minority rows that survive both filters.
std::vector<std::size_t> kept_rows(const Dataset& ds, Label label, const detail::ClassSplit& split,
                                   const SamplerConfig& cfg) {
    const Vector score = fit_propensity(ds, label).predict(ds.features());
    const double lo = score.minCoeff();
    const double range = score.maxCoeff() - lo;
    Matrix augmented(static_cast<Eigen::Index>(ds.rows()), static_cast<Eigen::Index>(ds.cols() + 1));
    augmented.leftCols(static_cast<Eigen::Index>(ds.cols())) = ds.features();
    for (Eigen::Index i = 0; i < augmented.rows(); ++i) {
        augmented(i, augmented.cols() - 1) = range > 0.0 ? (score(i) - lo) / range : 0.0;
    }

    const std::size_t k = detail::clamp_k(cfg.k, ds.rows());
    const NeighborModel model(augmented, ds.row_ids(), cfg.search);
    const Matrix queries = detail::gather_rows(augmented, split.minority);
    const auto neighbors = knn_query(model, queries, detail::gather_ids(ds, split.minority), k);

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < split.minority.size(); ++i) {
        std::size_t same = 0;
        for (const auto& nb : neighbors[i].tail(k)) same += ds.label(nb.index) == label;
        if (same < cfg.nras_threshold) continue;
        if (cfg.nras_propensity_floor && queries(static_cast<Eigen::Index>(i), queries.cols() - 1) <
                                             *cfg.nras_propensity_floor) {
            continue;
        }
        kept.push_back(split.minority[i]);
    }
    return kept;
}

}  // namespace

std::vector<RowId> nras_kept_set(const Dataset& ds, Label minority_label, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    return detail::gather_ids(ds, kept_rows(ds, minority_label, split, cfg));
}

SyntheticBatch nras(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const auto kept = kept_rows(ds, minority_label, split, cfg);
    if (kept.empty()) throw EmptySeedSet(std::string(kId));

    const Matrix points = detail::gather_rows(ds.features(), kept);
    const auto ids = detail::gather_ids(ds, kept);
    const std::size_t k = kept.size() >= 2 ? detail::clamp_k(cfg.k, kept.size()) : 0;
    std::vector<NeighborList> neighbors(kept.size());
    if (k > 0) neighbors = knn_query(NeighborModel(points, ids, cfg.search), points, ids, k);

    auto plan = detail::plan_stream(cfg, kId, minority_label);
    const auto counts = detail::uniform_counts(kept.size(), n_to_add, plan);
    return detail::generate(ds.cols(), minority_label, ids, counts, cfg, kId,
                            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                                if (k == 0) {
                                    detail::copy_row(points, slot, out);
                                    prov = {ids[slot], kNoPartner, "duplicate"};
                                    return;
                                }
                                const auto tail = neighbors[slot].tail(k);
                                const Neighbor& nb = tail[rng.index(tail.size())];
                                detail::interpolate(points, slot, nb.index, rng.uniform(), out);
                                prov = {ids[slot], nb.row_id, std::string(kId)};
                            });
}

}  // namespace rebalance
