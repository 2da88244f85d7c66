#include "rebalance/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "rebalance/error.hpp"
#include "rebalance/random.hpp"
#include "rebalance/samplers.hpp"

namespace rebalance {
namespace {

constexpr std::uint64_t kFoldStream = 3;
constexpr std::uint64_t kSubsetStream = 4;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::size_t> shuffled(std::vector<std::size_t> idx, RandomStream& rng) {
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    return idx;
}

struct ClassStats {
    Label label;
    Vector mean;
    Vector var;
    std::size_t count;
};

std::vector<ClassStats> class_stats(const Dataset& train) {
    if (train.empty()) throw DataError("classifier: empty training set");
    std::vector<ClassStats> out;
    for (const auto& c : class_counts(train)) {
        const auto idx = indices_by_label(train, c.label, true);
        Vector mean = Vector::Zero(static_cast<Eigen::Index>(train.cols()));
        for (auto i : idx) mean += train.row(i).transpose();
        mean /= static_cast<double>(idx.size());
        Vector var = Vector::Zero(mean.size());
        for (auto i : idx) var += (train.row(i).transpose() - mean).cwiseAbs2();
        var /= static_cast<double>(idx.size());
        out.push_back({c.label, std::move(mean), std::move(var), c.count});
    }
    return out;
}

void check_test_labels(const std::vector<ClassStats>& stats, const Dataset& test) {
    std::set<Label> known;
    for (const auto& s : stats) known.insert(s.label);
    for (Label l : test.labels()) {
        if (!known.count(l)) throw DataError("classifier: class " + test.class_name(l) + " has no training rows");
    }
    if (test.cols() != static_cast<std::size_t>(stats.front().mean.size())) {
        throw DataError("classifier: train and test column counts differ");
    }
}

}  // namespace

FoldPlan stratified_folds(const Dataset& ds, std::size_t n_folds, std::uint64_t seed) {
    if (n_folds < 2) throw ConfigError("folds must be at least 2");
    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.seed = seed;
    std::vector<std::size_t> fold_of(ds.rows(), 0);
    std::size_t offset = 0;
    for (const auto& c : class_counts(ds)) {
        if (c.count < n_folds) {
            throw DataError("class " + ds.class_name(c.label) + " has " + std::to_string(c.count) +
                            " rows, fewer than " + std::to_string(n_folds) + " folds");
        }
        RandomStream rng(seed, stream_key({kFoldStream, static_cast<std::uint64_t>(c.label)}));
        const auto idx = shuffled(indices_by_label(ds, c.label, true), rng);
        for (std::size_t i = 0; i < idx.size(); ++i) fold_of[idx[i]] = (offset + i) % n_folds;
        offset = (offset + idx.size()) % n_folds;
    }
    plan.folds.resize(n_folds);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (std::size_t f = 0; f < n_folds; ++f) {
            (f == fold_of[i] ? plan.folds[f].test : plan.folds[f].train).push_back(ds.row_id(i));
        }
    }
    return plan;
}

Dataset select_rows(const Dataset& ds, std::span<const RowId> ids) {
    std::unordered_map<RowId, std::size_t> where;
    where.reserve(ds.rows());
    for (std::size_t i = 0; i < ds.rows(); ++i) where.emplace(ds.row_id(i), i);
    std::vector<std::size_t> idx;
    idx.reserve(ids.size());
    for (RowId id : ids) {
        const auto it = where.find(id);
        if (it == where.end()) throw DataError("unknown row id " + std::to_string(id));
        idx.push_back(it->second);
    }
    return ds.select(idx);
}

Dataset stratified_subset(const Dataset& ds, std::size_t size, std::uint64_t seed) {
    if (size > ds.rows()) {
        throw ConfigError("subset size " + std::to_string(size) + " exceeds " + std::to_string(ds.rows()) + " rows");
    }
    const auto counts = class_counts(ds);
    std::vector<double> weights;
    std::vector<RowId> keys;
    for (const auto& c : counts) {
        weights.push_back(static_cast<double>(c.count));
        keys.push_back(c.label);
    }
    auto quotas = allocate_quotas(weights, keys, size);
    if (size >= counts.size()) {
        // keep every class present: move single units from the largest share
        for (auto& q : quotas) {
            if (q > 0) continue;
            auto largest = std::max_element(quotas.begin(), quotas.end());
            --*largest;
            q = 1;
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        RandomStream rng(seed, stream_key({kSubsetStream, static_cast<std::uint64_t>(counts[c].label)}));
        auto idx = shuffled(indices_by_label(ds, counts[c].label, true), rng);
        keep.insert(keep.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quotas[c]));
    }
    std::sort(keep.begin(), keep.end());
    return ds.select(keep);
}

std::vector<Label> gaussian_nb(const Dataset& train, const Dataset& test, const GaussianNbOptions& options) {
    const auto stats = class_stats(train);
    check_test_labels(stats, test);
    const double n = static_cast<double>(train.rows());
    std::vector<double> log_prior;
    std::vector<Vector> var;
    std::vector<double> log_norm;
    for (const auto& s : stats) {
        log_prior.push_back(options.uniform_priors ? 0.0 : std::log(static_cast<double>(s.count) / n));
        Vector v = s.var.cwiseMax(options.variance_floor);
        log_norm.push_back(-0.5 * (v.array() * (2.0 * std::numbers::pi)).log().sum());
        var.push_back(std::move(v));
    }
    std::vector<Label> out(test.rows());
    for (std::size_t i = 0; i < test.rows(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        Label arg = stats.front().label;
        for (std::size_t c = 0; c < stats.size(); ++c) {
            const auto diff = (test.row(i).transpose() - stats[c].mean).array();
            const double score = log_prior[c] + log_norm[c] - 0.5 * (diff.square() / var[c].array()).sum();
            if (score > best) {
                best = score;
                arg = stats[c].label;
            }
        }
        out[i] = arg;
    }
    return out;
}

std::vector<Label> nearest_centroid(const Dataset& train, const Dataset& test) {
    const auto stats = class_stats(train);
    check_test_labels(stats, test);
    std::vector<Label> out(test.rows());
    for (std::size_t i = 0; i < test.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Label arg = stats.front().label;
        for (const auto& s : stats) {
            const double d = (test.row(i).transpose() - s.mean).squaredNorm();
            if (d < best) {
                best = d;
                arg = s.label;
            }
        }
        out[i] = arg;
    }
    return out;
}

Classifier find_classifier(std::string_view id) {
    if (id == "gaussian_nb") return [](const Dataset& a, const Dataset& b) { return gaussian_nb(a, b); };
    if (id == "nearest_centroid") return nearest_centroid;
    throw ConfigError("unknown classifier '" + std::string(id) + "' (valid: gaussian_nb, nearest_centroid)");
}

std::vector<std::string> classifier_ids() { return {"gaussian_nb", "nearest_centroid"}; }

std::vector<Label> classify_baseline(const Dataset& train, const Dataset& test, std::string_view classifier_id) {
    return find_classifier(classifier_id)(train, test);
}

std::vector<ExperimentRecord> run_experiment(const Dataset& ds, std::string_view sampler_id,
                                             std::string_view classifier_id, const SamplerConfig& cfg,
                                             const ExperimentOptions& options) {
    return run_experiment(ds, sampler_id, std::string(classifier_id), find_classifier(classifier_id), cfg, options);
}

std::vector<ExperimentRecord> run_experiment(const Dataset& ds, std::string_view sampler_id,
                                             const std::string& classifier_name, const Classifier& classifier,
                                             const SamplerConfig& cfg, const ExperimentOptions& options) {
    cfg.validate();
    const auto& sampler = find_sampler(sampler_id);
    const auto plan = stratified_folds(ds, options.n_folds, cfg.seed);
    const std::size_t classes = ds.class_count();

    std::vector<ExperimentRecord> records;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        Dataset train = select_rows(ds, plan.folds[f].train);
        Dataset test = select_rows(ds, plan.folds[f].test);
        if (options.normalize) {
            const auto scaler = MinMaxScaler::fit(train);
            train = scaler.apply(train);
            test = scaler.apply(test);
        }

        ExperimentRecord rec;
        rec.dataset = options.dataset_name;
        rec.sampler = std::string(sampler.id);
        rec.classifier = classifier_name;
        rec.fold = f;

        auto t0 = std::chrono::steady_clock::now();
        Dataset balanced = transform(train, cfg, sampler.id);
        rec.sampling_time = seconds_since(t0);

        const std::unordered_set<RowId> test_ids(test.row_ids().begin(), test.row_ids().end());
        for (RowId id : balanced.row_ids()) {
            if (id >= kSyntheticIdBase && test_ids.count(id)) {
                throw Error("synthetic row " + std::to_string(id) + " leaked into test fold " + std::to_string(f));
            }
        }

        t0 = std::chrono::steady_clock::now();
        const auto predicted = classifier(balanced, test);
        rec.classifier_time = seconds_since(t0);
        rec.total_time = rec.sampling_time + rec.classifier_time;

        rec.metrics = evaluate(confusion(test.labels(), predicted, classes), cfg.beta);
        rec.train_rows = balanced.rows();
        rec.test_rows = test.rows();
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ExperimentSummary> summarize(std::span<const ExperimentRecord> records) {
    std::vector<ExperimentSummary> out;
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot;
    for (const auto& r : records) {
        const auto key = std::make_tuple(r.dataset, r.classifier, r.sampler);
        auto it = slot.find(key);
        if (it == slot.end()) {
            it = slot.emplace(key, out.size()).first;
            out.push_back({r.dataset, r.sampler, r.classifier});
        }
        auto& s = out[it->second];
        ++s.folds;
        s.av_acc += r.metrics.av_acc;
        s.av_fb += r.metrics.av_fb;
        s.m_avg += r.metrics.m_avg;
        s.cba += r.metrics.cba;
        s.sampling_time += r.sampling_time;
        s.classifier_time += r.classifier_time;
        s.total_time += r.total_time;
    }
    for (auto& s : out) {
        const double n = static_cast<double>(s.folds);
        s.av_acc /= n;
        s.av_fb /= n;
        s.m_avg /= n;
        s.cba /= n;
        s.sampling_time /= n;
        s.classifier_time /= n;
        s.total_time /= n;
    }
    return out;
}

std::vector<TimingEntry> timing_scan(const Dataset& ds, std::span<const std::string> sampler_ids,
                                     std::span<const std::size_t> sizes, const SamplerConfig& cfg,
                                     const TimingOptions& options) {
    cfg.validate();
    if (sampler_ids.empty()) throw ConfigError("timing: no samplers given");
    if (sizes.empty()) throw ConfigError("timing: no sizes given");
    if (options.repeats == 0) throw ConfigError("timing: repeats must be at least 1");
    std::set<std::string> seen;
    for (const auto& id : sampler_ids) {
        find_sampler(id);
        if (!seen.insert(id).second) throw ConfigError("timing: duplicate sampler '" + id + "'");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] > ds.rows()) {
            throw ConfigError("timing: size " + std::to_string(sizes[i]) + " exceeds " + std::to_string(ds.rows()) +
                              " rows");
        }
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw ConfigError("timing: sizes must be strictly ascending");
    }

    // one subset (and split) per size, shared by every sampler
    std::vector<std::vector<Dataset>> splits;
    for (std::size_t size : sizes) {
        const Dataset subset = stratified_subset(ds, size, cfg.seed);
        std::vector<Dataset> trains;
        if (options.n_folds < 2) {
            trains.push_back(subset);
        } else {
            for (const auto& fold : stratified_folds(subset, options.n_folds, cfg.seed).folds) {
                trains.push_back(select_rows(subset, fold.train));
            }
        }
        splits.push_back(std::move(trains));
    }

    std::vector<TimingEntry> out;
    for (const auto& id : sampler_ids) {
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            std::vector<double> runs;
            for (std::size_t r = 0; r < options.repeats; ++r) {
                double total = 0.0;
                for (const auto& train : splits[s]) {
                    const auto t0 = std::chrono::steady_clock::now();
                    const Dataset balanced = transform(train, cfg, id);
                    total += seconds_since(t0);
                }
                runs.push_back(total / static_cast<double>(splits[s].size()));
            }
            std::sort(runs.begin(), runs.end());
            const std::size_t m = runs.size();
            const double median = m % 2 ? runs[m / 2] : 0.5 * (runs[m / 2 - 1] + runs[m / 2]);
            out.push_back({id, sizes[s], median});
        }
    }
    return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw ConfigError("fit_line: need matching, non-empty inputs");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace rebalance
