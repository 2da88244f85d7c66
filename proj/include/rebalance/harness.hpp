#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rebalance/dataset.hpp"
#include "rebalance/metrics.hpp"
#include "rebalance/sampler_config.hpp"

namespace rebalance {

struct Fold {
    std::vector<RowId> train;  ///< in dataset order
    std::vector<RowId> test;   ///< in dataset order

    friend bool operator==(const Fold&, const Fold&) = default;
};

struct FoldPlan {
    std::size_t n_folds = 5;
    std::uint64_t seed = 0;
    std::vector<Fold> folds;

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/**
 * Stratified k-fold plan. Each class is shuffled with its own stream and
 * dealt round-robin, starting where the previous class stopped, so every
 * fold holds floor or ceil of count/n_folds rows of each class.
 *
 * Throws ConfigError for n_folds < 2 and DataError when a class has fewer
 * than n_folds rows.
 */
FoldPlan stratified_folds(const Dataset& ds, std::size_t n_folds, std::uint64_t seed);

/// Rows of ds with the given ids, in the order listed. Throws DataError for an unknown id.
Dataset select_rows(const Dataset& ds, std::span<const RowId> ids);

/**
 * Stratified subset of exactly `size` rows, in dataset order. Class shares
 * follow allocate_quotas over the class counts, with at least one row per
 * class when size allows. Throws ConfigError when size exceeds ds.rows().
 */
Dataset stratified_subset(const Dataset& ds, std::size_t size, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Classifiers

/// Fits on train and returns one predicted label per test row.
using Classifier = std::function<std::vector<Label>(const Dataset& train, const Dataset& test)>;

struct GaussianNbOptions {
    double variance_floor = 1e-9;
    bool uniform_priors = false;
};

/// Diagonal Gaussian naive Bayes. Ties go to the lowest label.
std::vector<Label> gaussian_nb(const Dataset& train, const Dataset& test, const GaussianNbOptions& options = {});
/// Nearest class mean under Euclidean distance. Ties go to the lowest label.
std::vector<Label> nearest_centroid(const Dataset& train, const Dataset& test);

/// "gaussian_nb" or "nearest_centroid"; ConfigError otherwise.
Classifier find_classifier(std::string_view id);
std::vector<std::string> classifier_ids();

/// Throws DataError for an empty train set or a test label with no train rows.
std::vector<Label> classify_baseline(const Dataset& train, const Dataset& test, std::string_view classifier_id);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentRecord {
    std::string dataset;
    std::string sampler;
    std::string classifier;
    std::size_t fold = 0;
    MetricReport metrics;
    double sampling_time = 0.0;    ///< seconds
    double classifier_time = 0.0;  ///< seconds
    double total_time = 0.0;       ///< sampling_time + classifier_time
    std::size_t train_rows = 0;    ///< after sampling
    std::size_t test_rows = 0;
};

struct ExperimentOptions {
    std::string dataset_name = "dataset";
    std::size_t n_folds = 5;
    bool normalize = false;  ///< min-max fitted on each train split
};

/**
 * Cross-validated run of one sampler and one classifier. The fold plan
 * depends only on the dataset and cfg.seed, so runs with different
 * samplers are paired. Only train splits are resampled; a synthetic row
 * reaching a test split raises Error.
 */
std::vector<ExperimentRecord> run_experiment(const Dataset& ds, std::string_view sampler_id,
                                             std::string_view classifier_id, const SamplerConfig& cfg,
                                             const ExperimentOptions& options = {});
std::vector<ExperimentRecord> run_experiment(const Dataset& ds, std::string_view sampler_id,
                                             const std::string& classifier_name, const Classifier& classifier,
                                             const SamplerConfig& cfg, const ExperimentOptions& options = {});

/// Per-fold means for one (sampler, classifier) pair.
struct ExperimentSummary {
    std::string dataset;
    std::string sampler;
    std::string classifier;
    std::size_t folds = 0;
    double av_acc = 0.0;
    double av_fb = 0.0;
    double m_avg = 0.0;
    double cba = 0.0;
    double sampling_time = 0.0;
    double classifier_time = 0.0;
    double total_time = 0.0;
};

/// Groups records by (dataset, classifier, sampler) in first-seen order.
std::vector<ExperimentSummary> summarize(std::span<const ExperimentRecord> records);

// ---------------------------------------------------------------------------
// Timing

struct TimingEntry {
    std::string sampler;
    std::size_t size = 0;
    double seconds = 0.0;  ///< median over repeats of the mean per-fold transform time
};

struct TimingOptions {
    std::size_t repeats = 3;
    std::size_t n_folds = 5;  ///< below 2: time transform on the whole subset
};

/**
 * Sampling time per (sampler, size), sampler-major. Sizes must be strictly
 * ascending and at most ds.rows(); sampler ids must be distinct. Each size
 * uses one stratified subset shared by all samplers.
 */
std::vector<TimingEntry> timing_scan(const Dataset& ds, std::span<const std::string> sampler_ids,
                                     std::span<const std::size_t> sizes, const SamplerConfig& cfg,
                                     const TimingOptions& options = {});

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double at(double x) const { return intercept + slope * x; }
};

/// Least-squares line. A single point gives a line through it with slope 0.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace rebalance
