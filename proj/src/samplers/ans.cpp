#include <algorithm>
#include <cmath>
#include <cstdint>

#include "common.hpp"
#include "rebalance/error.hpp"

namespace rebalance {
namespace {

constexpr std::string_view kId = "ans";

struct Plan {
    AnsPlan public_plan;
    std::vector<std::size_t> pused_rows;  // positions into ds
    std::vector<NeighborList> pused_neighbors;
};

Plan make_plan(const Dataset& ds, const detail::ClassSplit& split, std::size_t n_to_add,
               const SamplerConfig& cfg) {
    Plan plan;
    AnsPlan& p = plan.public_plan;
    const Matrix minority = detail::gather_rows(ds.features(), split.minority);
    p.minority_ids = detail::gather_ids(ds, split.minority);
    const std::size_t m = p.minority_ids.size();

    const auto closest = knn_query(NeighborModel(minority, p.minority_ids, cfg.search), minority, p.minority_ids, 1);
    p.closest_minority_distance.resize(m);
    for (std::size_t i = 0; i < m; ++i) p.closest_minority_distance[i] = closest[i].tail(1)[0].distance;

    p.out_border.assign(m, 0);
    if (!split.majority.empty()) {
        const NeighborModel majority(detail::gather_rows(ds.features(), split.majority),
                                     detail::gather_ids(ds, split.majority), cfg.search);
        const auto border =
            radius_query(majority, minority, p.minority_ids, p.closest_minority_distance, cfg.radius_neighbor_cap);
        for (std::size_t i = 0; i < m; ++i) p.out_border[i] = border[i].neighbors.size();
    }

    // first c where the outcast count stops changing and some rows stay below it
    const auto c_max = static_cast<std::int64_t>(std::floor(static_cast<double>(ds.rows()) * cfg.c_max_ratio));
    std::int64_t previous = -1;
    std::size_t chosen = static_cast<std::size_t>(std::max<std::int64_t>(c_max, 0)) + 1;
    for (std::int64_t c = 1; c <= c_max; ++c) {
        const auto outcasts = static_cast<std::int64_t>(
            std::count_if(p.out_border.begin(), p.out_border.end(), [&](std::size_t v) { return v >= static_cast<std::size_t>(c); }));
        if (outcasts == previous) {
            chosen = static_cast<std::size_t>(c);
            if (std::any_of(p.out_border.begin(), p.out_border.end(), [&](std::size_t v) { return v < chosen; })) {
                break;
            }
        }
        previous = outcasts;
    }
    p.c = chosen;

    for (std::size_t i = 0; i < m; ++i) {
        if (p.out_border[i] < p.c) {
            plan.pused_rows.push_back(split.minority[i]);
            p.pused.push_back(p.minority_ids[i]);
            p.radius = std::max(p.radius, p.closest_minority_distance[i]);
        }
    }
    if (p.pused.empty()) return plan;

    const Matrix pused = detail::gather_rows(ds.features(), plan.pused_rows);
    plan.pused_neighbors =
        radius_query(NeighborModel(pused, p.pused, cfg.search), pused, p.pused, p.radius, cfg.radius_neighbor_cap);
    std::vector<double> weights(p.pused.size());
    p.neighbor_counts.resize(p.pused.size());
    for (std::size_t i = 0; i < p.pused.size(); ++i) {
        p.neighbor_counts[i] = plan.pused_neighbors[i].tail().size();
        weights[i] = static_cast<double>(p.neighbor_counts[i]);
    }
    p.quotas = allocate_quotas(weights, p.pused, n_to_add);
    return plan;
}

}  // namespace

AnsPlan ans_plan(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    if (split.minority.size() < 2) return {};
    return make_plan(ds, split, n_to_add, cfg).public_plan;
}

SyntheticBatch ans(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const auto plan = make_plan(ds, split, n_to_add, cfg);
    const auto& p = plan.public_plan;
    if (p.pused.empty()) throw EmptySeedSet(std::string(kId));

    return detail::generate(ds.cols(), minority_label, p.pused, p.quotas, cfg, kId,
                            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                                const auto tail = plan.pused_neighbors[slot].tail(cfg.k);
                                if (tail.empty()) {
                                    detail::copy_row(ds.features(), plan.pused_rows[slot], out);
                                    prov = {p.pused[slot], kNoPartner, "duplicate"};
                                    return;
                                }
                                const Neighbor& nb = tail[rng.index(tail.size())];
                                detail::interpolate(ds.features(), plan.pused_rows[slot], plan.pused_rows[nb.index],
                                                    rng.uniform(), out);
                                prov = {p.pused[slot], nb.row_id, std::string(kId)};
                            });
}

}  // namespace rebalance
