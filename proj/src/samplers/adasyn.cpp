#include "common.hpp"

namespace rebalance {

SyntheticBatch adasyn(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    constexpr std::string_view kId = "adasyn";
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const std::size_t k = detail::clamp_k(cfg.k, ds.rows());
    const NeighborModel model(ds, cfg.search);
    const Matrix points = detail::gather_rows(ds.features(), split.minority);
    const auto ids = detail::gather_ids(ds, split.minority);
    const auto neighbors = knn_query(model, points, ids, k);

    const std::size_t m = ids.size();
    std::vector<double> ratio(m, 0.0);
    std::vector<std::vector<std::size_t>> minority_partners(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& nb : neighbors[i].tail(k)) {
            if (ds.label(nb.index) == minority_label) {
                minority_partners[i].push_back(nb.index);
            } else {
                ratio[i] += 1.0;
            }
        }
    }
    const auto quotas = allocate_quotas(ratio, ids, n_to_add);

    return detail::generate(ds.cols(), minority_label, ids, quotas, cfg, kId,
                            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                                const auto& partners = minority_partners[slot];
                                if (partners.empty()) {
                                    detail::copy_row(ds.features(), split.minority[slot], out);
                                    prov = {ids[slot], kNoPartner, "duplicate"};
                                    return;
                                }
                                const std::size_t p = partners[rng.index(partners.size())];
                                detail::interpolate(ds.features(), split.minority[slot], p, rng.uniform(), out);
                                prov = {ids[slot], ds.row_id(p), std::string(kId)};
                            });
}

}  // namespace rebalance
