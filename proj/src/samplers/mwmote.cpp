#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"
#include "rebalance/error.hpp"
#include "rebalance/kmeans.hpp"

namespace rebalance {
namespace {

constexpr std::string_view kId = "mwmote";

struct Weights {
    MwmoteWeights public_weights;
    std::vector<std::size_t> simin_rows;  // positions into ds
};

std::vector<std::size_t> distinct_rows(const std::vector<NeighborList>& lists, std::size_t k,
                                       std::span<const std::size_t> reference_rows) {
    std::vector<std::size_t> rows;
    for (const auto& list : lists) {
        for (const auto& nb : list.tail(k)) rows.push_back(reference_rows[nb.index]);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

Weights compute_weights(const Dataset& ds, Label label, const detail::ClassSplit& split, const SamplerConfig& cfg) {
    Weights w;
    MwmoteWeights& out = w.public_weights;
    const Matrix minority = detail::gather_rows(ds.features(), split.minority);
    const auto minority_ids = detail::gather_ids(ds, split.minority);

    // Sminf: minority rows with at least one minority row among their k1 neighbors
    const std::size_t k1 = detail::clamp_k(cfg.k1, ds.rows());
    const auto nn1 = knn_query(NeighborModel(ds, cfg.search), minority, minority_ids, k1);
    std::vector<std::size_t> sminf;
    for (std::size_t i = 0; i < split.minority.size(); ++i) {
        const auto tail = nn1[i].tail(k1);
        if (std::any_of(tail.begin(), tail.end(), [&](const Neighbor& nb) { return ds.label(nb.index) == label; })) {
            sminf.push_back(split.minority[i]);
        }
    }
    out.sminf = detail::gather_ids(ds, sminf);
    if (sminf.empty() || split.majority.empty()) return w;

    // Sbmaj: majority neighbors of Sminf
    const std::size_t k2 = std::min(cfg.k2, split.majority.size());
    const NeighborModel majority(detail::gather_rows(ds.features(), split.majority),
                                 detail::gather_ids(ds, split.majority), cfg.search);
    const auto nn2 = knn_query(majority, detail::gather_rows(ds.features(), sminf), out.sminf, k2);
    const auto sbmaj = distinct_rows(nn2, k2, split.majority);
    out.sbmaj = detail::gather_ids(ds, sbmaj);

    // Simin: minority neighbors of Sbmaj
    const std::size_t k3 = std::min(cfg.k3, split.minority.size());
    const NeighborModel minority_model(minority, minority_ids, cfg.search);
    const auto nn3 = knn_query(minority_model, detail::gather_rows(ds.features(), sbmaj), out.sbmaj, k3);
    w.simin_rows = distinct_rows(nn3, k3, split.minority);
    out.simin = detail::gather_ids(ds, w.simin_rows);

    const std::size_t ni = w.simin_rows.size();
    out.selection_weight.assign(ni, 0.0);
    // per borderline majority row: Cf to every Simin row, normalized into Df
    std::vector<std::vector<double>> contrib(sbmaj.size());
    parallel_for(sbmaj.size(), [&](std::size_t a) {
        const RowVector y = ds.row(sbmaj[a]);
        std::vector<double> cf(ni);
        double sum = 0.0;
        for (std::size_t b = 0; b < ni; ++b) {
            cf[b] = mwmote_closeness(y, ds.row(w.simin_rows[b]), cfg);
            sum += cf[b];
        }
        for (std::size_t b = 0; b < ni; ++b) cf[b] = sum > 0.0 ? cf[b] * (cf[b] / sum) : 0.0;
        contrib[a] = std::move(cf);
    });
    for (const auto& row : contrib) {
        for (std::size_t b = 0; b < ni; ++b) out.selection_weight[b] += row[b];
    }
    double total = 0.0;
    for (double v : out.selection_weight) total += v;
    out.probability.resize(ni);
    for (std::size_t b = 0; b < ni; ++b) {
        out.probability[b] = total > 0.0 ? out.selection_weight[b] / total : 1.0 / static_cast<double>(ni);
    }
    return w;
}

}  // namespace

double mwmote_closeness(const RowVector& y, const RowVector& x, const SamplerConfig& cfg) {
    const double dn = squared_distance(y, x) / static_cast<double>(y.size());
    const double inverse = dn > 0.0 ? 1.0 / dn : std::numeric_limits<double>::infinity();
    const double cutoff = inverse <= cfg.mwmote_cf_th ? inverse : cfg.mwmote_cf_th;
    return cutoff / cfg.mwmote_cf_th * cfg.mwmote_cmax;
}

MwmoteWeights mwmote_weights(const Dataset& ds, Label minority_label, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    return compute_weights(ds, minority_label, split, cfg).public_weights;
}

SyntheticBatch mwmote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    if (n_to_add == 0) return detail::empty_batch(ds.cols(), minority_label);
    if (split.minority.size() < 2) return detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);

    const auto w = compute_weights(ds, minority_label, split, cfg);
    const auto& weights = w.public_weights;
    if (weights.simin.empty()) throw EmptySeedSet(std::string(kId));

    // clusters over the whole minority class supply the partners
    const Matrix minority = detail::gather_rows(ds.features(), split.minority);
    auto km_stream = detail::plan_stream(cfg, kId, minority_label, 0x4b4d);
    const auto km = kmeans_fit(minority, cfg.mwmote_cluster_k, cfg.kmeans_max_iterations, km_stream);
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(km.centroids.rows()));
    for (std::size_t i = 0; i < split.minority.size(); ++i) members[km.assignments[i]].push_back(split.minority[i]);
    std::vector<std::size_t> cluster_of(ds.rows(), 0);
    for (std::size_t i = 0; i < split.minority.size(); ++i) cluster_of[split.minority[i]] = km.assignments[i];

    auto plan = detail::plan_stream(cfg, kId, minority_label);
    const auto counts = detail::weighted_counts(weights.probability, n_to_add, plan);
    return detail::generate(
        ds.cols(), minority_label, weights.simin, counts, cfg, kId,
        [&](std::size_t slot, std::size_t, RandomStream& rng, double* out, Provenance& prov) {
            const std::size_t base = w.simin_rows[slot];
            const auto& cluster = members[cluster_of[base]];
            if (cluster.size() < 2) {
                detail::copy_row(ds.features(), base, out);
                prov = {weights.simin[slot], kNoPartner, "duplicate"};
                return;
            }
            // uniform over the other members of the cluster
            std::size_t pick = rng.index(cluster.size() - 1);
            const auto self = static_cast<std::size_t>(std::find(cluster.begin(), cluster.end(), base) - cluster.begin());
            if (pick >= self) ++pick;
            detail::interpolate(ds.features(), base, cluster[pick], rng.uniform(), out);
            prov = {weights.simin[slot], ds.row_id(cluster[pick]), std::string(kId)};
        });
}

}  // namespace rebalance
