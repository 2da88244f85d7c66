#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "common.hpp"

namespace rebalance {

GapInterval safe_level_gap_interval(std::size_t safe_level_base, std::size_t safe_level_partner) {
    if (safe_level_partner == 0) {
        if (safe_level_base == 0) return {0.0, 0.0, true};
        return {0.0, 0.0, false};
    }
    const double ratio = static_cast<double>(safe_level_base) / static_cast<double>(safe_level_partner);
    if (ratio == 1.0) return {0.0, 1.0, false};
    if (ratio > 1.0) return {0.0, 1.0 / ratio, false};
    return {1.0 - ratio, 1.0, false};
}

SyntheticBatch safe_level_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                                const SamplerConfig& cfg) {
    constexpr std::string_view kId = "safe_level_smote";
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const std::size_t k = detail::clamp_k(cfg.k, ds.rows());
    const NeighborModel model(ds, cfg.search);
    // neighbors of the minority rows, then of every row that can be drawn as a partner
    std::vector<NeighborList> neighbors(ds.rows());
    std::vector<bool> known(ds.rows(), false);
    auto fill = [&](const std::vector<std::size_t>& rows) {
        auto lists = knn_query(model, detail::gather_rows(ds.features(), rows), detail::gather_ids(ds, rows), k);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            neighbors[rows[i]] = std::move(lists[i]);
            known[rows[i]] = true;
        }
    };
    fill(split.minority);
    std::vector<std::size_t> partners;
    for (std::size_t row : split.minority) {
        for (const auto& nb : neighbors[row].tail(k)) {
            if (!known[nb.index]) {
                known[nb.index] = true;
                partners.push_back(nb.index);
            }
        }
    }
    if (!partners.empty()) fill(partners);
    std::vector<std::size_t> safe_level(ds.rows(), 0);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (!known[i]) continue;
        for (const auto& nb : neighbors[i].tail(k)) safe_level[i] += ds.label(nb.index) == minority_label;
    }

    const auto ids = detail::gather_ids(ds, split.minority);
    const std::size_t budget =
        static_cast<std::size_t>(std::ceil(static_cast<double>(n_to_add) * (1.0 + cfg.safe_level_correction_rate)));

    struct Row {
        RowId base;
        std::size_t round;
        std::size_t index;
        RowVector values;
        Provenance provenance;
    };
    std::vector<Row> rows;
    rows.reserve(n_to_add);

    std::size_t missing = n_to_add;
    std::size_t attempts = 0;
    for (std::size_t round = 0; missing > 0 && attempts < budget; ++round) {
        const std::size_t draws = round == 0 ? missing : std::min(missing, budget - attempts);
        attempts += draws;
        const std::string tag = round == 0 ? std::string(kId) : std::string(kId) + "/retry" + std::to_string(round);
        auto plan = detail::plan_stream(cfg, tag, minority_label);
        const auto counts = detail::uniform_counts(ids.size(), draws, plan);
        auto batch = detail::generate(
            ds.cols(), minority_label, ids, counts, cfg, tag,
            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                const std::size_t base = split.minority[slot];
                const auto tail = neighbors[base].tail(k);
                const Neighbor& nb = tail[rng.index(tail.size())];
                const auto interval = safe_level_gap_interval(safe_level[base], safe_level[nb.index]);
                if (interval.rejected) {
                    prov = {ids[slot], nb.row_id, ""};
                    return;
                }
                const double gap = interval.hi > interval.lo ? rng.uniform(interval.lo, interval.hi) : interval.lo;
                detail::interpolate(ds.features(), base, nb.index, gap, out);
                prov = {ids[slot], nb.row_id, std::string(kId)};
            });
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (batch.provenance[i].tag.empty()) continue;
            rows.push_back({batch.provenance[i].base, round, i, batch.features.row(static_cast<Eigen::Index>(i)),
                            std::move(batch.provenance[i])});
            --missing;
        }
    }

    if (missing > 0) {
        // attempts exhausted: top up with copies of bases that have minority neighbors
        std::vector<std::size_t> safe;
        for (std::size_t i = 0; i < split.minority.size(); ++i) {
            if (safe_level[split.minority[i]] > 0) safe.push_back(i);
        }
        if (safe.empty()) {
            for (std::size_t i = 0; i < split.minority.size(); ++i) safe.push_back(i);
        }
        auto plan = detail::plan_stream(cfg, kId, minority_label, 0xf111);
        for (std::size_t i = 0; i < missing; ++i) {
            const std::size_t slot = safe[plan.index(safe.size())];
            rows.push_back({ids[slot], std::numeric_limits<std::size_t>::max(), i,
                            ds.features().row(static_cast<Eigen::Index>(split.minority[slot])),
                            Provenance{ids[slot], kNoPartner, "duplicate"}});
        }
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.base, a.round, a.index) < std::tie(b.base, b.round, b.index);
    });
    SyntheticBatch out = detail::empty_batch(ds.cols(), minority_label);
    out.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ds.cols()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = rows[i].values;
        out.provenance.push_back(std::move(rows[i].provenance));
    }
    return out;
}

}  // namespace rebalance
