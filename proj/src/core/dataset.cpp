#include "rebalance/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "rebalance/error.hpp"

namespace rebalance {

Dataset::Dataset(Matrix features, std::vector<Label> labels, std::vector<RowId> row_ids,
                 std::vector<std::string> feature_names, std::vector<std::string> class_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      row_ids_(std::move(row_ids)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
    const auto n = rows();
    if (labels_.size() != n) {
        throw DataError("label count " + std::to_string(labels_.size()) + " does not match row count " +
                        std::to_string(n));
    }
    if (row_ids_.empty() && n > 0) {
        row_ids_.resize(n);
        std::iota(row_ids_.begin(), row_ids_.end(), RowId{0});
    }
    if (row_ids_.size() != n) throw DataError("row id count does not match row count");
    if (!feature_names_.empty() && feature_names_.size() != cols()) {
        throw DataError("feature name count does not match column count");
    }
    if (!features_.allFinite()) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < cols(); ++j) {
                if (!std::isfinite(features_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) {
                    throw DataError("non-finite feature at row " + std::to_string(i) + ", column " +
                                    std::to_string(j));
                }
            }
        }
    }
    for (Label l : labels_) {
        if (l < 0) throw DataError("negative class label");
    }
    std::unordered_set<RowId> seen;
    seen.reserve(n);
    for (RowId id : row_ids_) {
        if (!seen.insert(id).second) throw DataError("duplicate row id " + std::to_string(id));
    }
}

std::size_t Dataset::class_count() const {
    std::size_t c = class_names_.size();
    for (Label l : labels_) c = std::max(c, static_cast<std::size_t>(l) + 1);
    return c;
}

std::string Dataset::class_name(Label label) const {
    if (label >= 0 && static_cast<std::size_t>(label) < class_names_.size()) {
        return class_names_[static_cast<std::size_t>(label)];
    }
    return std::to_string(label);
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
    Matrix f(static_cast<Eigen::Index>(indices.size()), features_.cols());
    std::vector<Label> l(indices.size());
    std::vector<RowId> ids(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = indices[i];
        f.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(src));
        l[i] = labels_[src];
        ids[i] = row_ids_[src];
    }
    return Dataset(std::move(f), std::move(l), std::move(ids), feature_names_, class_names_);
}

Dataset Dataset::with_features(Matrix features) const {
    if (features.rows() != features_.rows()) throw DataError("replacement features change the row count");
    auto names = features.cols() == features_.cols() ? feature_names_ : std::vector<std::string>{};
    return Dataset(std::move(features), labels_, row_ids_, std::move(names), class_names_);
}

RowId Dataset::next_synthetic_id() const {
    RowId next = kSyntheticIdBase;
    for (RowId id : row_ids_) next = std::max(next, id + 1);
    return next;
}

std::vector<ClassSummary> class_counts(const Dataset& ds) {
    std::map<Label, std::size_t> counts;
    for (Label l : ds.labels()) ++counts[l];
    std::vector<ClassSummary> out;
    out.reserve(counts.size());
    for (auto [label, count] : counts) out.push_back({label, count});
    return out;
}

std::vector<std::size_t> indices_by_label(const Dataset& ds, Label label, bool keep_equal) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if ((ds.label(i) == label) == keep_equal) idx.push_back(i);
    }
    return idx;
}

Dataset filter_by_label(const Dataset& ds, Label label, bool keep_equal) {
    const auto idx = indices_by_label(ds, label, keep_equal);
    return ds.select(idx);
}

Dataset concat(const Dataset& a, const Dataset& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.cols() != b.cols()) throw DataError("cannot concatenate datasets with different column counts");
    Matrix f(static_cast<Eigen::Index>(a.rows() + b.rows()), static_cast<Eigen::Index>(a.cols()));
    f.topRows(static_cast<Eigen::Index>(a.rows())) = a.features();
    f.bottomRows(static_cast<Eigen::Index>(b.rows())) = b.features();
    std::vector<Label> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    std::vector<RowId> ids = a.row_ids();
    ids.insert(ids.end(), b.row_ids().begin(), b.row_ids().end());
    const auto& names = a.class_names().size() >= b.class_names().size() ? a.class_names() : b.class_names();
    return Dataset(std::move(f), std::move(labels), std::move(ids), a.feature_names(), names);
}

MinMaxScaler MinMaxScaler::fit(const Dataset& ds) {
    MinMaxScaler s;
    if (ds.empty()) {
        s.min = Vector::Zero(static_cast<Eigen::Index>(ds.cols()));
        s.range = Vector::Ones(static_cast<Eigen::Index>(ds.cols()));
        return s;
    }
    s.min = ds.features().colwise().minCoeff().transpose();
    s.range = ds.features().colwise().maxCoeff().transpose() - s.min;
    return s;
}

Dataset MinMaxScaler::apply(const Dataset& ds) const {
    if (static_cast<Eigen::Index>(ds.cols()) != min.size()) throw DataError("scaler dimension mismatch");
    Matrix f = ds.features();
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        // constant columns collapse to 0
        const double r = range(j) > 0.0 ? range(j) : 1.0;
        f.col(j) = ((f.col(j).array() - min(j)) / r).matrix();
        if (range(j) <= 0.0) f.col(j).setZero();
    }
    return ds.with_features(std::move(f));
}

}  // namespace rebalance
