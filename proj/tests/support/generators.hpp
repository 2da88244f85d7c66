#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "rebalance/dataset.hpp"
#include "rebalance/samplers.hpp"

namespace rebalance::testing {

/// Small random-case generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    std::size_t size(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mean = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mean, sd)(engine_); }
    bool coin() { return size(0, 1) == 1; }
    std::mt19937_64& engine() { return engine_; }

    Matrix matrix(std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0);

private:
    std::mt19937_64 engine_;
};

/// Gaussian blobs, one per class, rows grouped by class.
Dataset blobs(const std::vector<std::size_t>& counts, std::size_t dims, double spread, double separation,
              std::uint64_t seed);

/// 7-class, 10-feature instance with the class proportions of the UCI Covertype data.
Dataset covertype_like(std::size_t rows, std::uint64_t seed);

/// Random labeled dataset: classes in [2, max_classes], every class at least min_class rows,
/// imbalance ratio up to max_ir.
Dataset random_dataset(Gen& gen, std::size_t max_rows, std::size_t max_dims, std::size_t max_classes,
                       double max_ir, std::size_t min_class = 2);

/// Row index by row id.
std::unordered_map<RowId, std::size_t> index_of(const Dataset& ds);

/// Position of x along the segment a -> b and its distance from the line.
struct SegmentFit {
    double t = 0.0;
    double residual = 0.0;
};
SegmentFit fit_segment(const RowVector& a, const RowVector& b, const RowVector& x);

/// Per-class counts indexed by label.
std::vector<std::size_t> label_counts(const Dataset& ds);

}  // namespace rebalance::testing
