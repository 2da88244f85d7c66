#include <cmath>

#include "common.hpp"

namespace rebalance {

SyntheticBatch smote_d(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    constexpr std::string_view kId = "smote_d";
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const Matrix points = detail::gather_rows(ds.features(), split.minority);
    const auto ids = detail::gather_ids(ds, split.minority);
    const std::size_t k = detail::clamp_k(cfg.k, ids.size());
    const NeighborModel model(points, ids, cfg.search);
    const auto neighbors = knn_query(model, points, ids, k);

    const std::size_t m = ids.size();
    std::vector<double> stddev(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto tail = neighbors[i].tail(k);
        double mean = 0.0;
        for (const auto& nb : tail) mean += nb.distance;
        mean /= static_cast<double>(tail.size());
        double var = 0.0;
        for (const auto& nb : tail) var += (nb.distance - mean) * (nb.distance - mean);
        stddev[i] = std::sqrt(var / static_cast<double>(tail.size()));
    }
    const auto quotas = allocate_quotas(stddev, ids, n_to_add);

    // per base: how many rows go to each neighbor, proportional to its distance
    std::vector<std::vector<std::size_t>> split_per_neighbor(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto tail = neighbors[i].tail(k);
        std::vector<double> dist;
        std::vector<RowId> nb_ids;
        for (const auto& nb : tail) {
            dist.push_back(nb.distance);
            nb_ids.push_back(nb.row_id);
        }
        split_per_neighbor[i] = allocate_quotas(dist, nb_ids, quotas[i]);
    }

    return detail::generate(ds.cols(), minority_label, ids, quotas, cfg, kId,
                            [&](std::size_t slot, std::size_t ordinal, RandomStream&, double* out, Provenance& prov) {
                                const auto tail = neighbors[slot].tail(k);
                                const auto& parts = split_per_neighbor[slot];
                                std::size_t j = 0;
                                while (ordinal >= parts[j]) ordinal -= parts[j++];
                                const double frac =
                                    static_cast<double>(ordinal + 1) / static_cast<double>(parts[j]);
                                detail::interpolate(points, slot, tail[j].index, frac, out);
                                prov = {ids[slot], tail[j].row_id, std::string(kId)};
                            });
}

}  // namespace rebalance
