#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rebalance {

/// Row-major so each instance is a contiguous span of features.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

/// Dense class index in [0, C).
using Label = int;
/// Stable instance identifier, preserved through filtering and unions.
using RowId = std::int64_t;

/// Synthetic rows receive ids at or above this value so they can never
/// collide with ids assigned by the loader (0..n-1).
inline constexpr RowId kSyntheticIdBase = RowId{1} << 62;

struct ClassSummary {
    Label label;
    std::size_t count;

    friend bool operator==(const ClassSummary&, const ClassSummary&) = default;
};

/**
 * Immutable labeled feature matrix.
 *
 * Invariants checked on construction: one label per row, every feature
 * finite, row ids unique. class_names maps dense labels back to the
 * spelling found in the source file; it may be empty, in which case the
 * dense label itself is the name.
 */
class Dataset {
public:
    Dataset() = default;
    Dataset(Matrix features, std::vector<Label> labels, std::vector<RowId> row_ids = {},
            std::vector<std::string> feature_names = {}, std::vector<std::string> class_names = {});

    std::size_t rows() const { return static_cast<std::size_t>(features_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(features_.cols()); }
    bool empty() const { return rows() == 0; }

    const Matrix& features() const { return features_; }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<RowId>& row_ids() const { return row_ids_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& class_names() const { return class_names_; }

    auto row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)); }
    Label label(std::size_t i) const { return labels_[i]; }
    RowId row_id(std::size_t i) const { return row_ids_[i]; }

    /// Number of classes known to the encoding (at least max label + 1).
    std::size_t class_count() const;
    std::string class_name(Label label) const;

    /// New dataset holding the given rows in the given order.
    Dataset select(std::span<const std::size_t> indices) const;
    /// Same rows with features replaced (shape must match).
    Dataset with_features(Matrix features) const;
    /// Smallest id not smaller than kSyntheticIdBase and above every id in use.
    RowId next_synthetic_id() const;

private:
    Matrix features_;
    std::vector<Label> labels_;
    std::vector<RowId> row_ids_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_names_;
};

/// One summary per distinct label, sorted by label.
std::vector<ClassSummary> class_counts(const Dataset& ds);

/// Rows whose label equals (keep_equal) or differs from the given label.
Dataset filter_by_label(const Dataset& ds, Label label, bool keep_equal);

/// Row indices whose label equals (keep_equal) or differs from the given label.
std::vector<std::size_t> indices_by_label(const Dataset& ds, Label label, bool keep_equal);

/// Concatenation of rows. Column counts and encodings must agree.
Dataset concat(const Dataset& a, const Dataset& b);

/// Per-feature min/max scaling fitted on one dataset and applied to others.
struct MinMaxScaler {
    Vector min;
    Vector range;

    static MinMaxScaler fit(const Dataset& ds);
    Dataset apply(const Dataset& ds) const;
};

}  // namespace rebalance
