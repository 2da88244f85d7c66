#include "common.hpp"
#include "rebalance/kmeans.hpp"

namespace rebalance {

SyntheticBatch cluster_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                             const SamplerConfig& cfg) {
    constexpr std::string_view kId = "cluster_smote";
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const Matrix points = detail::gather_rows(ds.features(), split.minority);
    const auto ids = detail::gather_ids(ds, split.minority);
    auto km_stream = detail::plan_stream(cfg, kId, minority_label, 0x4b4d);
    const auto km = kmeans_fit(points, cfg.cluster_k, cfg.kmeans_max_iterations, km_stream);

    const std::size_t clusters = static_cast<std::size_t>(km.centroids.rows());
    std::vector<std::vector<std::size_t>> members(clusters);  // positions into points
    for (std::size_t i = 0; i < ids.size(); ++i) members[km.assignments[i]].push_back(i);

    // neighbor lists within each cluster, indexed by position into points
    std::vector<NeighborList> neighbors(ids.size());
    std::vector<std::size_t> cluster_k(clusters, 0);
    for (std::size_t c = 0; c < clusters; ++c) {
        if (members[c].size() < 2) continue;
        const Matrix cp = detail::gather_rows(points, members[c]);
        std::vector<RowId> cids;
        for (std::size_t p : members[c]) cids.push_back(ids[p]);
        cluster_k[c] = detail::clamp_k(cfg.k, members[c].size());
        const NeighborModel model(cp, cids, cfg.search);
        auto lists = knn_query(model, cp, cids, cluster_k[c]);
        for (std::size_t j = 0; j < members[c].size(); ++j) {
            for (auto& nb : lists[j].neighbors) nb.index = members[c][nb.index];
            neighbors[members[c][j]] = std::move(lists[j]);
        }
    }

    // random cluster, then random member of it
    std::vector<std::size_t> nonempty;
    for (std::size_t c = 0; c < clusters; ++c) {
        if (!members[c].empty()) nonempty.push_back(c);
    }
    auto plan = detail::plan_stream(cfg, kId, minority_label);
    std::vector<std::size_t> counts(ids.size(), 0);
    for (std::size_t i = 0; i < n_to_add; ++i) {
        const auto& m = members[nonempty[plan.index(nonempty.size())]];
        ++counts[m[plan.index(m.size())]];
    }

    return detail::generate(ds.cols(), minority_label, ids, counts, cfg, kId,
                            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                                const std::size_t c = km.assignments[slot];
                                if (members[c].size() < 2) {
                                    detail::copy_row(points, slot, out);
                                    prov = {ids[slot], kNoPartner, "duplicate"};
                                    return;
                                }
                                const auto tail = neighbors[slot].tail(cluster_k[c]);
                                const Neighbor& nb = tail[rng.index(tail.size())];
                                detail::interpolate(points, slot, nb.index, rng.uniform(), out);
                                prov = {ids[slot], nb.row_id, std::string(kId)};
                            });
}

}  // namespace rebalance
