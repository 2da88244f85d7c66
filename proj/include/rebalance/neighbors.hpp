#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rebalance/dataset.hpp"

namespace rebalance {

enum class SearchStrategy { brute_force, metric_tree };

struct Neighbor {
    RowId row_id;
    std::size_t index;  ///< position in the reference set
    double distance;    ///< Euclidean

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/**
 * Neighbors of one query, nearest first. Equal distances are ordered with
 * the query's own row first, then by ascending row id.
 */
struct NeighborList {
    RowId query_row_id = -1;
    std::vector<Neighbor> neighbors;
    bool truncated = false;  ///< radius queries: more points were within range

    /// Neighbors without the self-entry at the head, if present.
    std::span<const Neighbor> tail() const {
        std::span<const Neighbor> all(neighbors);
        if (!all.empty() && all.front().row_id == query_row_id) return all.subspan(1);
        return all;
    }
    /// At most k entries of tail().
    std::span<const Neighbor> tail(std::size_t k) const {
        auto t = tail();
        return t.first(std::min(k, t.size()));
    }

    friend bool operator==(const NeighborList&, const NeighborList&) = default;
};

template <class A, class B>
double squared_distance(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return (a - b).squaredNorm();
}

template <class A, class B>
double euclidean_distance(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return std::sqrt(squared_distance(a, b));
}

/**
 * Exact nearest-neighbor index over a fixed reference set.
 *
 * The metric tree is a ball tree split on the widest coordinate at the
 * median; both strategies share the same distance arithmetic and ordering
 * key, so they return identical lists. The model is immutable and may be
 * queried from many threads.
 */
class NeighborModel {
public:
    NeighborModel(Matrix points, std::vector<RowId> row_ids, SearchStrategy strategy = SearchStrategy::metric_tree,
                  std::size_t leaf_size = 32);
    explicit NeighborModel(const Dataset& reference, SearchStrategy strategy = SearchStrategy::metric_tree,
                           std::size_t leaf_size = 32);
    ~NeighborModel();
    NeighborModel(NeighborModel&&) noexcept;
    NeighborModel& operator=(NeighborModel&&) noexcept;

    std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
    std::size_t dims() const { return static_cast<std::size_t>(points_.cols()); }
    SearchStrategy strategy() const { return strategy_; }
    const Matrix& points() const { return points_; }
    const std::vector<RowId>& row_ids() const { return row_ids_; }

    /// min(k + 1, size()) nearest references of one point.
    NeighborList knn(const double* query, RowId query_row_id, std::size_t k) const;
    /// References with distance <= radius, nearest first, truncated to max_neighbors.
    NeighborList radius(const double* query, RowId query_row_id, double radius, std::size_t max_neighbors) const;

private:
    struct Tree;

    Matrix points_;
    std::vector<RowId> row_ids_;
    SearchStrategy strategy_;
    std::unique_ptr<Tree> tree_;
};

/// k-NN for every query row, in query order. Throws ConfigError for k == 0
/// and for an empty reference set.
std::vector<NeighborList> knn_query(const NeighborModel& model, const Dataset& queries, std::size_t k);
std::vector<NeighborList> knn_query(const NeighborModel& model, const Matrix& queries,
                                    std::span<const RowId> query_row_ids, std::size_t k);

/// Radius query for every query row, in query order. Throws ConfigError for a negative radius.
std::vector<NeighborList> radius_query(const NeighborModel& model, const Dataset& queries, double radius,
                                       std::size_t max_neighbors);
std::vector<NeighborList> radius_query(const NeighborModel& model, const Matrix& queries,
                                       std::span<const RowId> query_row_ids, double radius,
                                       std::size_t max_neighbors);
/// Radius query with a separate radius per query row.
std::vector<NeighborList> radius_query(const NeighborModel& model, const Matrix& queries,
                                       std::span<const RowId> query_row_ids, std::span<const double> radii,
                                       std::size_t max_neighbors);

}  // namespace rebalance
