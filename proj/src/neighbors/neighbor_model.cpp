#include "rebalance/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rebalance/error.hpp"
#include "rebalance/parallel.hpp"

namespace rebalance {
namespace {

// Relative slack on tree lower bounds, kept as a margin against rounding.
constexpr double kBoundSlack = 1e-12;

struct Candidate {
    double sq;
    int not_self;
    RowId id;
    std::size_t index;
};

bool key_less(const Candidate& a, const Candidate& b) {
    if (a.sq != b.sq) return a.sq < b.sq;
    if (a.not_self != b.not_self) return a.not_self < b.not_self;
    return a.id < b.id;
}

// four independent sums; a single running sum serializes on add latency
[[gnu::always_inline]] inline double sq_dist(const double* a, const double* b, std::size_t d) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= d; j += 4) {
        const double t0 = a[j] - b[j];
        const double t1 = a[j + 1] - b[j + 1];
        const double t2 = a[j + 2] - b[j + 2];
        const double t3 = a[j + 3] - b[j + 3];
        s0 += t0 * t0;
        s1 += t1 * t1;
        s2 += t2 * t2;
        s3 += t3 * t3;
    }
    for (; j < d; ++j) {
        const double t = a[j] - b[j];
        s0 += t * t;
    }
    return (s0 + s1) + (s2 + s3);
}

// Distances for a run of consecutive points first, then the caller's filter:
// keeps the arithmetic free of the filter's branches.
template <class F>
void scan_block(const double* query, const double* points, std::size_t count, std::size_t d, F&& f) {
    constexpr std::size_t kChunk = 64;
    double sq[kChunk];
    for (std::size_t start = 0; start < count; start += kChunk) {
        const std::size_t c = std::min(kChunk, count - start);
        for (std::size_t i = 0; i < c; ++i) sq[i] = sq_dist(query, points + (start + i) * d, d);
        for (std::size_t i = 0; i < c; ++i) f(start + i, sq[i]);
    }
}

NeighborList finish(std::vector<Candidate>& cands, RowId query_row_id) {
    NeighborList out;
    out.query_row_id = query_row_id;
    out.neighbors.reserve(cands.size());
    for (const auto& c : cands) out.neighbors.push_back({c.id, c.index, std::sqrt(c.sq)});
    return out;
}

}  // namespace

struct NeighborModel::Tree {
    struct Node {
        std::size_t begin;
        std::size_t end;
        int left = -1;
        int right = -1;
    };

    std::size_t dims = 0;
    std::vector<Node> nodes;
    std::vector<double> boxes;  // per node: d lower corners, then d upper corners
    std::vector<std::size_t> order;
    Matrix sorted;  // rows in tree order, so leaves scan contiguous memory

    Tree(const Matrix& pts, std::size_t leaf_size) : dims(static_cast<std::size_t>(pts.cols())) {
        order.resize(static_cast<std::size_t>(pts.rows()));
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (!order.empty()) build(pts, 0, order.size(), std::max<std::size_t>(1, leaf_size));
        sorted.resize(pts.rows(), pts.cols());
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted.row(static_cast<Eigen::Index>(i)) = pts.row(static_cast<Eigen::Index>(order[i]));
        }
    }

    int build(const Matrix& pts, std::size_t begin, std::size_t end, std::size_t leaf_size) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({begin, end, -1, -1});
        const std::size_t at = boxes.size();
        boxes.resize(at + 2 * dims);
        double* lo = boxes.data() + at;
        double* hi = lo + dims;
        std::fill(lo, lo + dims, std::numeric_limits<double>::infinity());
        std::fill(hi, hi + dims, -std::numeric_limits<double>::infinity());
        for (std::size_t i = begin; i < end; ++i) {
            const double* p = pts.data() + order[i] * dims;
            for (std::size_t j = 0; j < dims; ++j) {
                lo[j] = std::min(lo[j], p[j]);
                hi[j] = std::max(hi[j], p[j]);
            }
        }
        std::size_t dim = 0;
        double spread = 0.0;
        for (std::size_t j = 0; j < dims; ++j) {
            if (hi[j] - lo[j] > spread) {
                spread = hi[j] - lo[j];
                dim = j;
            }
        }

        if (end - begin <= leaf_size || spread <= 0.0) return id;  // small, or all points coincide

        const std::size_t mid = begin + (end - begin) / 2;
        auto first = order.begin() + static_cast<std::ptrdiff_t>(begin);
        std::nth_element(first, order.begin() + static_cast<std::ptrdiff_t>(mid),
                         order.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                             const double va = pts.data()[a * dims + dim];
                             const double vb = pts.data()[b * dims + dim];
                             return va != vb ? va < vb : a < b;
                         });
        const int left = build(pts, begin, mid, leaf_size);
        const int right = build(pts, mid, end, leaf_size);
        nodes[static_cast<std::size_t>(id)].left = left;
        nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }

    // Squared distance from q to the node's box. Each term is at most the
    // matching term of any point inside, so the bound never exceeds a true
    // squared distance even after rounding.
    double lower_bound_sq(int node_id, const double* q) const {
        const double* lo = boxes.data() + static_cast<std::size_t>(node_id) * 2 * dims;
        const double* hi = lo + dims;
        double s = 0.0;
        for (std::size_t j = 0; j < dims; ++j) {
            // at most one of the two gaps is positive
            const double t = std::max(lo[j] - q[j], 0.0) + std::max(q[j] - hi[j], 0.0);
            s += t * t;
        }
        return s * (1.0 - kBoundSlack);
    }
};

NeighborModel::NeighborModel(Matrix points, std::vector<RowId> row_ids, SearchStrategy strategy,
                             std::size_t leaf_size)
    : points_(std::move(points)), row_ids_(std::move(row_ids)), strategy_(strategy) {
    if (row_ids_.size() != size()) throw ConfigError("neighbor model: row id count does not match point count");
    if (strategy_ == SearchStrategy::metric_tree) tree_ = std::make_unique<Tree>(points_, leaf_size);
}

NeighborModel::NeighborModel(const Dataset& reference, SearchStrategy strategy, std::size_t leaf_size)
    : NeighborModel(reference.features(), reference.row_ids(), strategy, leaf_size) {}

NeighborModel::~NeighborModel() = default;
NeighborModel::NeighborModel(NeighborModel&&) noexcept = default;
NeighborModel& NeighborModel::operator=(NeighborModel&&) noexcept = default;

NeighborList NeighborModel::knn(const double* query, RowId query_row_id, std::size_t k) const {
    const std::size_t n = size();
    const std::size_t d = dims();
    const std::size_t m = std::min(k + 1, n);

    // best m so far, sorted by key
    std::vector<Candidate> best;
    best.reserve(m + 1);
    auto offer = [&](const double* p, std::size_t i) {
        const double sq = sq_dist(query, p, d);
        if (best.size() == m && sq > best.back().sq) return;
        const Candidate c{sq, row_ids_[i] == query_row_id ? 0 : 1, row_ids_[i], i};
        if (best.size() == m && !key_less(c, best.back())) return;
        best.insert(std::upper_bound(best.begin(), best.end(), c, key_less), c);
        if (best.size() > m) best.pop_back();
    };

    if (m == 0) return finish(best, query_row_id);
    if (!tree_) {
        for (std::size_t i = 0; i < n; ++i) offer(points_.data() + i * d, i);
        return finish(best, query_row_id);
    }

    auto visit = [&](auto&& self, int node_id, double bound) -> void {
        if (best.size() == m && bound > best.back().sq) return;
        const auto& node = tree_->nodes[static_cast<std::size_t>(node_id)];
        if (node.left < 0) {
            for (std::size_t p = node.begin; p < node.end; ++p) offer(tree_->sorted.data() + p * d, tree_->order[p]);
            return;
        }
        const double dl = tree_->lower_bound_sq(node.left, query);
        const double dr = tree_->lower_bound_sq(node.right, query);
        if (dl <= dr) {
            self(self, node.left, dl);
            self(self, node.right, dr);
        } else {
            self(self, node.right, dr);
            self(self, node.left, dl);
        }
    };
    visit(visit, 0, tree_->lower_bound_sq(0, query));
    return finish(best, query_row_id);
}

NeighborList NeighborModel::radius(const double* query, RowId query_row_id, double radius,
                                   std::size_t max_neighbors) const {
    const std::size_t n = size();
    const std::size_t d = dims();
    std::vector<Candidate> hits;
    bool truncated = false;
    // clearly outside skips the sqrt; near the boundary the exact test decides
    double limit_sq = radius * radius * (1.0 + 1e-9);
    // once more than max_neighbors hits exist only the nearest can survive,
    // so the limit shrinks to the worst of those
    auto compact = [&] {
        truncated = true;
        if (max_neighbors == 0) {
            hits.clear();
            limit_sq = -1.0;
            return;
        }
        std::nth_element(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(max_neighbors - 1), hits.end(),
                         key_less);
        limit_sq = hits[max_neighbors - 1].sq;
        hits.resize(max_neighbors);
    };
    auto consider = [&](std::size_t i, double sq) {
        if (sq > limit_sq || std::sqrt(sq) > radius) return;
        hits.push_back({sq, row_ids_[i] == query_row_id ? 0 : 1, row_ids_[i], i});
        if (hits.size() > 2 * max_neighbors + 16 || max_neighbors == 0) compact();
    };

    if (!tree_) {
        scan_block(query, points_.data(), n, d, consider);
    } else if (n > 0) {
        auto visit = [&](auto&& self, int node_id, double bound) -> void {
            if (bound > limit_sq) return;
            const auto& node = tree_->nodes[static_cast<std::size_t>(node_id)];
            if (node.left < 0) {
                scan_block(query, tree_->sorted.data() + node.begin * d, node.end - node.begin, d,
                           [&](std::size_t p, double sq) { consider(tree_->order[node.begin + p], sq); });
                return;
            }
            const double dl = tree_->lower_bound_sq(node.left, query);
            const double dr = tree_->lower_bound_sq(node.right, query);
            if (dl <= dr) {
                self(self, node.left, dl);
                self(self, node.right, dr);
            } else {
                self(self, node.right, dr);
                self(self, node.left, dl);
            }
        };
        visit(visit, 0, tree_->lower_bound_sq(0, query));
    }

    std::sort(hits.begin(), hits.end(), key_less);
    if (hits.size() > max_neighbors) {
        truncated = true;
        hits.resize(max_neighbors);
    }
    NeighborList out = finish(hits, query_row_id);
    out.truncated = truncated;
    return out;
}

std::vector<NeighborList> knn_query(const NeighborModel& model, const Matrix& queries,
                                    std::span<const RowId> query_row_ids, std::size_t k) {
    if (k == 0) throw ConfigError("k must be at least 1");
    if (model.size() == 0) throw ConfigError("empty reference set");
    if (static_cast<std::size_t>(queries.cols()) != model.dims()) throw ConfigError("query dimension mismatch");
    if (query_row_ids.size() != static_cast<std::size_t>(queries.rows())) {
        throw ConfigError("query row id count does not match query count");
    }
    std::vector<NeighborList> out(query_row_ids.size());
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = model.knn(queries.data() + i * model.dims(), query_row_ids[i], k);
    });
    return out;
}

std::vector<NeighborList> knn_query(const NeighborModel& model, const Dataset& queries, std::size_t k) {
    return knn_query(model, queries.features(), queries.row_ids(), k);
}

std::vector<NeighborList> radius_query(const NeighborModel& model, const Matrix& queries,
                                       std::span<const RowId> query_row_ids, std::span<const double> radii,
                                       std::size_t max_neighbors) {
    if (radii.size() != query_row_ids.size()) throw ConfigError("one radius per query required");
    for (double r : radii) {
        if (!(r >= 0.0)) throw ConfigError("radius must be non-negative");
    }
    if (static_cast<std::size_t>(queries.cols()) != model.dims() && model.size() > 0) {
        throw ConfigError("query dimension mismatch");
    }
    if (query_row_ids.size() != static_cast<std::size_t>(queries.rows())) {
        throw ConfigError("query row id count does not match query count");
    }
    std::vector<NeighborList> out(query_row_ids.size());
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = model.radius(queries.data() + i * model.dims(), query_row_ids[i], radii[i], max_neighbors);
    });
    return out;
}

std::vector<NeighborList> radius_query(const NeighborModel& model, const Matrix& queries,
                                       std::span<const RowId> query_row_ids, double radius,
                                       std::size_t max_neighbors) {
    std::vector<double> radii(query_row_ids.size(), radius);
    if (!(radius >= 0.0)) throw ConfigError("radius must be non-negative");
    return radius_query(model, queries, query_row_ids, radii, max_neighbors);
}

std::vector<NeighborList> radius_query(const NeighborModel& model, const Dataset& queries, double radius,
                                       std::size_t max_neighbors) {
    return radius_query(model, queries.features(), queries.row_ids(), radius, max_neighbors);
}

}  // namespace rebalance
