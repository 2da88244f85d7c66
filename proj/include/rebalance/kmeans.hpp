#pragma once

#include <cstddef>
#include <vector>

#include "rebalance/dataset.hpp"
#include "rebalance/random.hpp"

namespace rebalance {

struct KMeansModel {
    Matrix centroids;  ///< k x d
    std::size_t iterations_run = 0;
    double inertia = 0.0;
    std::vector<double> inertia_trace;  ///< inertia after each Lloyd iteration
    std::vector<std::size_t> assignments;  ///< nearest centroid of each fitted point
};

/**
 * Lloyd's algorithm with k-means++ seeding drawn from `stream`.
 *
 * Stops when assignments no longer change or after max_iterations. A
 * cluster that empties is reseeded at the point farthest from its current
 * centroid. k larger than the point count is clamped with a warning.
 * Throws ConfigError for k == 0 or max_iterations == 0, DataError for no points.
 */
KMeansModel kmeans_fit(const Matrix& points, std::size_t k, std::size_t max_iterations, RandomStream& stream);
KMeansModel kmeans_fit(const Dataset& ds, std::size_t k, std::size_t max_iterations, RandomStream& stream);

/// Nearest centroid per row; ties go to the lowest centroid index.
std::vector<std::size_t> kmeans_assign(const KMeansModel& model, const Matrix& points);
std::vector<std::size_t> kmeans_assign(const KMeansModel& model, const Dataset& ds);

}  // namespace rebalance
