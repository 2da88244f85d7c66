#include "rebalance/kmeans.hpp"

#include <limits>
#include <string>

#include "rebalance/error.hpp"
#include "rebalance/log.hpp"
#include "rebalance/parallel.hpp"

namespace rebalance {
namespace {

struct Assignment {
    std::size_t cluster;
    double sq;
};

Assignment nearest(const Matrix& centroids, const Matrix& points, Eigen::Index i) {
    Assignment best{0, std::numeric_limits<double>::infinity()};
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double sq = (points.row(i) - centroids.row(c)).squaredNorm();
        if (sq < best.sq) best = {static_cast<std::size_t>(c), sq};
    }
    return best;
}

std::vector<Assignment> assign_all(const Matrix& centroids, const Matrix& points) {
    std::vector<Assignment> out(static_cast<std::size_t>(points.rows()));
    parallel_for(out.size(), [&](std::size_t i) { out[i] = nearest(centroids, points, static_cast<Eigen::Index>(i)); },
                 256);
    return out;
}

Matrix plus_plus_init(const Matrix& points, std::size_t k, RandomStream& stream) {
    const auto n = static_cast<std::size_t>(points.rows());
    Matrix centroids(static_cast<Eigen::Index>(k), points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(stream.index(n)));
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = (points.row(static_cast<Eigen::Index>(i)) - centroids.row(0)).squaredNorm();
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = stream.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (target < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = stream.index(n);
        }
        centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], (points.row(static_cast<Eigen::Index>(i)) -
                                     centroids.row(static_cast<Eigen::Index>(c)))
                                        .squaredNorm());
        }
    }
    return centroids;
}

}  // namespace

KMeansModel kmeans_fit(const Matrix& points, std::size_t k, std::size_t max_iterations, RandomStream& stream) {
    if (k == 0) throw ConfigError("k-means: k must be at least 1");
    if (max_iterations == 0) throw ConfigError("k-means: max_iterations must be at least 1");
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw DataError("k-means: no points");
    if (k > n) {
        warn("k-means: k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " points, using k=" +
             std::to_string(n));
        k = n;
    }

    KMeansModel model;
    model.centroids = plus_plus_init(points, k, stream);
    std::vector<std::size_t> previous;
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        auto assigned = assign_all(model.centroids, points);
        std::vector<std::size_t> current(n);
        for (std::size_t i = 0; i < n; ++i) current[i] = assigned[i].cluster;
        if (current == previous) break;

        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t c : current) ++sizes[c];
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t far = n;
            double far_sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[current[i]] > 1 && assigned[i].sq > far_sq) {
                    far = i;
                    far_sq = assigned[i].sq;
                }
            }
            if (far == n) continue;  // every point already sits on a centroid
            --sizes[current[far]];
            current[far] = c;
            assigned[far] = {c, 0.0};
            sizes[c] = 1;
            model.centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
        }

        Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), points.cols());
        for (std::size_t i = 0; i < n; ++i) {
            sums.row(static_cast<Eigen::Index>(current[i])) += points.row(static_cast<Eigen::Index>(i));
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) {
                model.centroids.row(static_cast<Eigen::Index>(c)) =
                    sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(sizes[c]);
            }
        }
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            inertia += (points.row(static_cast<Eigen::Index>(i)) -
                        model.centroids.row(static_cast<Eigen::Index>(current[i])))
                           .squaredNorm();
        }
        model.inertia_trace.push_back(inertia);
        model.iterations_run = it;
        previous = std::move(current);
    }

    const auto final_assigned = assign_all(model.centroids, points);
    model.assignments.resize(n);
    model.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        model.assignments[i] = final_assigned[i].cluster;
        model.inertia += final_assigned[i].sq;
    }
    return model;
}

KMeansModel kmeans_fit(const Dataset& ds, std::size_t k, std::size_t max_iterations, RandomStream& stream) {
    return kmeans_fit(ds.features(), k, max_iterations, stream);
}

std::vector<std::size_t> kmeans_assign(const KMeansModel& model, const Matrix& points) {
    if (points.cols() != model.centroids.cols()) throw DataError("k-means: dimension mismatch");
    const auto assigned = assign_all(model.centroids, points);
    std::vector<std::size_t> out(assigned.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = assigned[i].cluster;
    return out;
}

std::vector<std::size_t> kmeans_assign(const KMeansModel& model, const Dataset& ds) {
    return kmeans_assign(model, ds.features());
}

}  // namespace rebalance
