#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "common.hpp"

namespace rebalance {
namespace {

constexpr std::string_view kId = "ccr";

bool strictly_inside(double distance, double radius) { return distance < radius - 1e-12 * std::max(1.0, radius); }

}  // namespace

double ccr_find_radius(std::span<const double> sorted_majority_distances, double energy,
                       std::size_t max_iterations) {
    const auto d = sorted_majority_distances;
    // points within radius, plus one for the minority example itself
    auto nop = [&](double radius) {
        return static_cast<double>(std::upper_bound(d.begin(), d.end(), radius) - d.begin()) + 1.0;
    };
    double radius = 0.0;
    for (std::size_t it = 0; energy > 0.0 && it < max_iterations; ++it) {
        const double inside = nop(radius);
        double delta = energy / inside;
        if (nop(radius + delta) > inside) {
            const auto next = std::upper_bound(d.begin(), d.end(), radius);
            delta = *next - radius;
        }
        radius += delta;
        energy -= delta * nop(radius);
    }
    return radius;
}

CcrResult ccr_resample(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    const auto split = detail::split_classes(ds, minority_label);
    CcrResult result;
    if (split.minority.size() < 2) {
        result.cleaned = ds;
        result.batch = n_to_add == 0 ? detail::empty_batch(ds.cols(), minority_label)
                                     : detail::duplicate_fallback(ds, minority_label, split, n_to_add, cfg, kId);
        return result;
    }

    const Matrix minority = detail::gather_rows(ds.features(), split.minority);
    const auto ids = detail::gather_ids(ds, split.minority);
    const std::size_t m = ids.size();
    Matrix majority = detail::gather_rows(ds.features(), split.majority);
    const auto majority_ids = detail::gather_ids(ds, split.majority);

    // radii from the nearest majority points, limited to the neighbor cap
    std::vector<double> radii(m, cfg.energy);
    if (!split.majority.empty()) {
        const NeighborModel model(majority, majority_ids, cfg.search);
        const std::size_t cap = std::min(cfg.radius_neighbor_cap, majority_ids.size());
        const auto lists = knn_query(model, minority, ids, cap);
        parallel_for(m, [&](std::size_t i) {
            std::vector<double> dist;
            for (std::size_t j = 0; j < std::min(cap, lists[i].neighbors.size()); ++j) {
                dist.push_back(lists[i].neighbors[j].distance);
            }
            radii[i] = ccr_find_radius(dist, cfg.energy);
        });
    }

    // Each caught majority point follows one pusher, picked at random, along
    // the ray from that minority base. If the pusher's boundary lies inside
    // other radii the point continues along the ray to the first exit that is
    // inside none, so it always ends on some recorded boundary.
    std::vector<bool> moved(majority_ids.size(), false);
    std::vector<std::size_t> boundary_of(majority_ids.size(), 0);
    if (!majority_ids.empty()) {
        const NeighborModel majority_model(majority, majority_ids, cfg.search);
        const auto caught = radius_query(majority_model, minority, ids, radii, majority_ids.size());
        std::vector<std::vector<std::size_t>> pushers(majority_ids.size());
        for (std::size_t i = 0; i < m; ++i) {
            for (const auto& nb : caught[i].neighbors) {
                if (strictly_inside(nb.distance, radii[i])) pushers[nb.index].push_back(i);
            }
        }
        const NeighborModel minority_model(minority, ids, cfg.search);
        const double max_radius = *std::max_element(radii.begin(), radii.end());
        parallel_for(majority_ids.size(), [&](std::size_t j) {
            if (pushers[j].empty()) return;
            RandomStream rng = detail::task_stream(cfg, "ccr/push", minority_label, majority_ids[j], 0);
            std::size_t on = pushers[j][rng.index(pushers[j].size())];
            const RowVector base = minority.row(static_cast<Eigen::Index>(on));
            RowVector dir = majority.row(static_cast<Eigen::Index>(j)) - base;
            double norm = dir.norm();
            while (norm == 0.0) {
                for (Eigen::Index c = 0; c < dir.size(); ++c) dir(c) = rng.normal(0.0, 1.0);
                norm = dir.norm();
            }
            dir /= norm;
            double t = radii[on];
            RowVector x = base + t * dir;
            for (std::size_t guard = 0; guard <= m; ++guard) {
                const auto hits = minority_model.radius(x.data(), kNoPartner, max_radius, m);
                double exit = t;
                std::size_t exit_ball = on;
                for (const auto& h : hits.neighbors) {
                    if (!strictly_inside(h.distance, radii[h.index])) continue;
                    // far intersection of the ray with ball h
                    const RowVector to_center = minority.row(static_cast<Eigen::Index>(h.index)) - base;
                    const double proj = to_center.dot(dir);
                    const double r = radii[h.index];
                    const double disc = std::max(0.0, proj * proj - to_center.squaredNorm() + r * r);
                    const double far = proj + std::sqrt(disc);
                    if (far > exit) {
                        exit = far;
                        exit_ball = h.index;
                    }
                }
                if (exit_ball == on && exit == t) break;
                t = exit > t ? exit : std::nextafter(t, std::numeric_limits<double>::infinity());
                on = exit_ball;
                x = base + t * dir;
            }
            majority.row(static_cast<Eigen::Index>(j)) = x;
            moved[j] = true;
            boundary_of[j] = on;
        });
    }

    Matrix cleaned = ds.features();
    for (std::size_t j = 0; j < split.majority.size(); ++j) {
        cleaned.row(static_cast<Eigen::Index>(split.majority[j])) = majority.row(static_cast<Eigen::Index>(j));
        if (moved[j]) {
            result.moved_ids.push_back(majority_ids[j]);
            result.boundary_ids.push_back(ids[boundary_of[j]]);
        }
    }
    result.cleaned = ds.with_features(std::move(cleaned));
    result.minority_ids = ids;
    result.radii = radii;

    if (n_to_add == 0) {
        result.batch = detail::empty_batch(ds.cols(), minority_label);
        return result;
    }
    std::vector<double> inverse(m);
    for (std::size_t i = 0; i < m; ++i) inverse[i] = 1.0 / radii[i];
    const auto quotas = allocate_quotas(inverse, ids, n_to_add);
    const auto d = static_cast<Eigen::Index>(ds.cols());
    result.batch = detail::generate(ds.cols(), minority_label, ids, quotas, cfg, kId,
                                    [&](std::size_t slot, std::size_t, RandomStream& rng, double* out,
                                        Provenance& prov) {
                                        for (Eigen::Index c = 0; c < d; ++c) {
                                            const double s = rng.sign();
                                            out[c] = minority(static_cast<Eigen::Index>(slot), c) +
                                                     s * rng.uniform() * radii[slot];
                                        }
                                        prov = {ids[slot], kNoPartner, std::string(kId)};
                                    });
    return result;
}

SyntheticBatch ccr(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg) {
    return ccr_resample(ds, minority_label, n_to_add, cfg).batch;
}

}  // namespace rebalance
