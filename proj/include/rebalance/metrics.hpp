#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rebalance/dataset.hpp"

namespace rebalance {

/// counts(i, j): instances of true class i predicted as class j.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t classes = 0) : classes_(classes), counts_(classes * classes, 0) {}

    std::size_t classes() const { return classes_; }
    std::uint64_t operator()(std::size_t truth, std::size_t predicted) const {
        return counts_[truth * classes_ + predicted];
    }
    std::uint64_t& operator()(std::size_t truth, std::size_t predicted) { return counts_[truth * classes_ + predicted]; }
    std::uint64_t total() const;
    std::uint64_t row_sum(std::size_t i) const;
    std::uint64_t col_sum(std::size_t j) const;

    static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows);

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t classes_;
    std::vector<std::uint64_t> counts_;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_beta = 0.0;
    double accuracy = 0.0;  ///< one-vs-rest (tp + tn) / total
};

struct MetricReport {
    double av_acc = 0.0;
    double m_avg = 0.0;
    double av_fb = 0.0;
    double cba = 0.0;
    double beta = 1.0;
    std::vector<ClassMetrics> per_class;
};

/// Throws DataError on length mismatch or a label outside [0, classes).
ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted, std::size_t classes);
/// Class count taken as 1 + the largest label seen.
ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted);

/**
 * AvAcc, MAvG, AvFb and CBA, each averaged over the C classes. Per-class
 * terms with a zero denominator count as 0. Throws DataError for an empty
 * matrix.
 */
MetricReport evaluate(const ConfusionMatrix& cm, double beta = 1.0);

}  // namespace rebalance
