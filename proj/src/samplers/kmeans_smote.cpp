#include <cmath>
#include <limits>

#include "common.hpp"
#include "rebalance/error.hpp"
#include "rebalance/kmeans.hpp"

namespace rebalance {
namespace {

constexpr std::string_view kId = "kmeans_smote";

struct Plan {
    std::vector<KMeansSmoteCluster> clusters;
    std::vector<std::vector<std::size_t>> minority_rows;  // positions into ds, per cluster
};

Plan make_plan(const Dataset& ds, Label label, std::size_t n_to_add, const SamplerConfig& cfg) {
    auto km_stream = detail::plan_stream(cfg, kId, label, 0x4b4d);
    const auto km = kmeans_fit(ds, cfg.cluster_k, cfg.kmeans_max_iterations, km_stream);
    const auto count = static_cast<std::size_t>(km.centroids.rows());

    Plan plan;
    plan.clusters.resize(count);
    plan.minority_rows.resize(count);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        auto& c = plan.clusters[km.assignments[i]];
        if (ds.label(i) == label) {
            ++c.minority_count;
            c.minority_ids.push_back(ds.row_id(i));
            plan.minority_rows[km.assignments[i]].push_back(i);
        } else {
            ++c.majority_count;
        }
    }

    const double de = cfg.density_exponent_de.value_or(static_cast<double>(ds.cols()));
    std::vector<double> log_sparsity(count, -std::numeric_limits<double>::infinity());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < count; ++c) {
        auto& cl = plan.clusters[c];
        cl.imbalance_ratio =
            static_cast<double>(cl.majority_count + 1) / static_cast<double>(cl.minority_count + 1);
        cl.kept = cl.minority_count > 0 && cl.imbalance_ratio < cfg.imbalance_threshold_irt;
        if (!cl.kept) continue;
        const auto& rows = plan.minority_rows[c];
        double sum = 0.0;
        for (std::size_t a = 0; a < rows.size(); ++a) {
            for (std::size_t b = a + 1; b < rows.size(); ++b) {
                sum += 2.0 * euclidean_distance(ds.row(rows[a]), ds.row(rows[b]));
            }
        }
        const auto m = static_cast<double>(rows.size());
        cl.average_distance = sum / (m * m);
        // sparsity = average_distance^de / m, kept in log space since de can be large
        if (cl.average_distance > 0.0) log_sparsity[c] = de * std::log(cl.average_distance) - std::log(m);
        top = std::max(top, log_sparsity[c]);
    }

    std::vector<double> weights;
    std::vector<RowId> keys;
    std::vector<std::size_t> kept;
    double total = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        if (!plan.clusters[c].kept) continue;
        const double w = std::isfinite(top) ? std::exp(log_sparsity[c] - top) : 1.0;
        weights.push_back(w);
        keys.push_back(static_cast<RowId>(c));
        kept.push_back(c);
        total += w;
    }
    const auto quotas = allocate_quotas(weights, keys, n_to_add);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        plan.clusters[kept[i]].weight = total > 0.0 ? weights[i] / total : 1.0 / static_cast<double>(kept.size());
        plan.clusters[kept[i]].quota = quotas[i];
    }
    return plan;
}

}  // namespace

std::vector<KMeansSmoteCluster> kmeans_smote_plan(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                                                  const SamplerConfig& cfg) {
    detail::split_classes(ds, minority_label);
    return make_plan(ds, minority_label, n_to_add, cfg).clusters;
}

SyntheticBatch kmeans_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                            const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const auto plan = make_plan(ds, minority_label, n_to_add, cfg);
    bool any = false;
    for (const auto& c : plan.clusters) any = any || c.kept;
    if (!any) throw EmptySeedSet(std::string(kId));

    // per-row neighbor lists within the row's cluster; bases drawn uniformly per cluster
    std::vector<std::size_t> base_rows;
    std::vector<RowId> base_ids;
    std::vector<std::size_t> counts;
    std::vector<NeighborList> neighbors;
    std::vector<std::size_t> base_k;
    auto draws = detail::plan_stream(cfg, kId, minority_label);
    for (std::size_t c = 0; c < plan.clusters.size(); ++c) {
        if (!plan.clusters[c].kept || plan.clusters[c].quota == 0) continue;
        const auto& rows = plan.minority_rows[c];
        const Matrix cp = detail::gather_rows(ds.features(), rows);
        const auto cids = detail::gather_ids(ds, rows);
        const std::size_t k = rows.size() >= 2 ? detail::clamp_k(cfg.k, rows.size()) : 0;
        std::vector<NeighborList> lists(rows.size());
        if (k > 0) lists = knn_query(NeighborModel(cp, cids, cfg.search), cp, cids, k);
        const auto local = detail::uniform_counts(rows.size(), plan.clusters[c].quota, draws);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            for (auto& nb : lists[j].neighbors) nb.index = rows[nb.index];
            base_rows.push_back(rows[j]);
            base_ids.push_back(cids[j]);
            counts.push_back(local[j]);
            neighbors.push_back(std::move(lists[j]));
            base_k.push_back(k);
        }
    }

    return detail::generate(ds.cols(), minority_label, base_ids, counts, cfg, kId,
                            [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
                                if (base_k[slot] == 0) {
                                    detail::copy_row(ds.features(), base_rows[slot], out);
                                    prov = {base_ids[slot], kNoPartner, "duplicate"};
                                    return;
                                }
                                const auto tail = neighbors[slot].tail(base_k[slot]);
                                const Neighbor& nb = tail[rng.index(tail.size())];
                                detail::interpolate(ds.features(), base_rows[slot], nb.index, rng.uniform(), out);
                                prov = {base_ids[slot], nb.row_id, std::string(kId)};
                            });
}

}  // namespace rebalance
