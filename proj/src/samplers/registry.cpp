#include <algorithm>
#include <array>
#include <string>

#include "common.hpp"
#include "rebalance/error.hpp"
#include "rebalance/log.hpp"

namespace rebalance {
namespace {

// knn count, k-means, dependent loop, probability, linear regression, radius, O(n^2)
constexpr std::array<SamplerInfo, 14> kSamplers{{
    {"adasyn", "ADASYN", &adasyn, {1, false, false, false, false, false, false}, true},
    {"ans", "ANS", &ans, {3, false, true, false, false, true, false}, false},
    {"borderline_smote", "Borderline SMOTE", &borderline_smote, {2, false, false, false, false, false, false}, true},
    {"ccr", "CCR", &ccr, {1, false, true, false, false, true, false}, true},
    {"cluster_smote", "Cluster SMOTE", &cluster_smote, {1, true, false, false, false, false, false}, true},
    {"gaussian_smote", "Gaussian SMOTE", &gaussian_smote, {1, false, false, false, false, false, false}, true},
    {"kmeans_smote", "k-Means SMOTE", &kmeans_smote, {1, true, false, false, false, false, true}, true},
    {"mwmote", "MWMOTE", &mwmote, {3, true, false, true, false, false, true}, false},
    {"nras", "NRAS", &nras, {1, false, false, false, true, false, false}, true},
    {"random_oversample", "Random Oversampling", &random_oversample, {0, false, false, false, false, false, false},
     true},
    {"rbo", "RBO", &rbo, {0, false, true, false, false, false, true}, false},
    {"safe_level_smote", "Safe Level SMOTE", &safe_level_smote, {2, false, false, false, false, false, false}, true},
    {"smote", "SMOTE", &smote, {1, false, false, false, false, false, false}, true},
    {"smote_d", "SMOTE-D", &smote_d, {1, false, false, true, false, false, false}, true},
}};

constexpr SamplerInfo kNone{"none", "None", nullptr, {}, true};

}  // namespace

std::span<const SamplerInfo> samplers() { return kSamplers; }

std::vector<std::string> sampler_ids() {
    std::vector<std::string> ids{std::string(kNone.id)};
    for (const auto& s : kSamplers) ids.emplace_back(s.id);
    return ids;
}

const SamplerInfo& find_sampler(std::string_view id) {
    if (id == kNone.id) return kNone;
    for (const auto& s : kSamplers) {
        if (s.id == id) return s;
    }
    std::string valid;
    for (const auto& name : sampler_ids()) valid += (valid.empty() ? "" : ", ") + name;
    throw ConfigError("unknown sampler '" + std::string(id) + "' (valid: " + valid + ")");
}

SyntheticBatch oversample(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg,
                          std::string_view sampler_id) {
    cfg.validate();
    const auto& info = find_sampler(sampler_id);
    if (!info.fn) {
        detail::split_classes(ds, minority_label);
        return detail::empty_batch(ds.cols(), minority_label);
    }
    return info.fn(ds, minority_label, n_to_add, cfg);
}

Dataset transform(const Dataset& ds, const SamplerConfig& cfg, std::string_view sampler_id) {
    cfg.validate();
    const auto& info = find_sampler(sampler_id);
    const auto counts = class_counts(ds);
    if (counts.size() < 2) throw DataError("nothing to balance: dataset has a single class");
    if (!info.fn) return ds;

    std::size_t majority = 0;
    for (const auto& c : counts) majority = std::max(majority, c.count);

    Dataset base = ds;
    std::vector<SyntheticBatch> batches;
    for (const auto& c : counts) {
        if (c.count == majority) continue;
        const std::size_t need = majority - c.count;
        if (info.id == "ccr") {
            auto result = ccr_resample(base, c.label, need, cfg);
            base = std::move(result.cleaned);
            batches.push_back(std::move(result.batch));
            continue;
        }
        try {
            batches.push_back(info.fn(ds, c.label, need, cfg));
        } catch (const EmptySeedSet& e) {
            warn(std::string(e.what()) + " for class " + ds.class_name(c.label) + ", using random oversampling");
            batches.push_back(random_oversample(ds, c.label, need, cfg));
        }
    }

    std::size_t added = 0;
    for (const auto& b : batches) added += b.size();
    const std::size_t n = base.rows();
    Matrix features(static_cast<Eigen::Index>(n + added), static_cast<Eigen::Index>(ds.cols()));
    features.topRows(static_cast<Eigen::Index>(n)) = base.features();
    std::vector<Label> labels = base.labels();
    std::vector<RowId> ids = base.row_ids();
    labels.reserve(n + added);
    ids.reserve(n + added);
    RowId next = base.next_synthetic_id();
    std::size_t row = n;
    for (const auto& b : batches) {
        if (b.size() > 0) features.middleRows(static_cast<Eigen::Index>(row), b.features.rows()) = b.features;
        row += b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            labels.push_back(b.label);
            ids.push_back(next++);
        }
    }
    return Dataset(std::move(features), std::move(labels), std::move(ids), ds.feature_names(), ds.class_names());
}

}  // namespace rebalance
