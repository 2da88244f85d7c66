#include "common.hpp"

#include <string>

#include "rebalance/error.hpp"
#include "rebalance/log.hpp"

namespace rebalance::detail {

ClassSplit split_classes(const Dataset& ds, Label minority_label) {
    ClassSplit split;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        (ds.label(i) == minority_label ? split.minority : split.majority).push_back(i);
    }
    if (split.minority.empty()) throw DataError("label " + ds.class_name(minority_label) + " has no rows");
    return split;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
    }
    return out;
}

std::vector<RowId> gather_ids(const Dataset& ds, std::span<const std::size_t> idx) {
    std::vector<RowId> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = ds.row_id(idx[i]);
    return out;
}

std::uint64_t sampler_key(std::string_view sampler) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : sampler) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

RandomStream plan_stream(const SamplerConfig& cfg, std::string_view sampler, Label label, std::uint64_t purpose) {
    return RandomStream(cfg.seed, stream_key({2, sampler_key(sampler), static_cast<std::uint64_t>(label), purpose}));
}

RandomStream task_stream(const SamplerConfig& cfg, std::string_view sampler, Label label, RowId base,
                         std::uint64_t ordinal) {
    return RandomStream(cfg.seed, stream_key({1, sampler_key(sampler), static_cast<std::uint64_t>(label),
                                              static_cast<std::uint64_t>(base), ordinal}));
}

std::vector<std::size_t> uniform_counts(std::size_t n, std::size_t total, RandomStream& plan) {
    std::vector<std::size_t> counts(n, 0);
    if (n == 0) return counts;
    for (std::size_t i = 0; i < total; ++i) ++counts[plan.index(n)];
    return counts;
}

std::size_t weighted_index(std::span<const double> cumulative, RandomStream& stream) {
    const double target = stream.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto pos = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(pos, cumulative.size() - 1);
}

std::vector<std::size_t> weighted_counts(std::span<const double> weights, std::size_t total, RandomStream& plan) {
    std::vector<double> cumulative(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) cumulative[i] = acc += weights[i];
    if (weights.empty() || !(acc > 0.0)) return uniform_counts(weights.size(), total, plan);
    std::vector<std::size_t> counts(weights.size(), 0);
    for (std::size_t i = 0; i < total; ++i) ++counts[weighted_index(cumulative, plan)];
    return counts;
}

SyntheticBatch empty_batch(std::size_t dims, Label label) {
    SyntheticBatch b;
    b.label = label;
    b.features.resize(0, static_cast<Eigen::Index>(dims));
    return b;
}

SyntheticBatch duplicate_fallback(const Dataset& ds, Label label, const ClassSplit& split, std::size_t n_to_add,
                                  const SamplerConfig& cfg, std::string_view sampler) {
    warn(std::string(sampler) + ": class " + ds.class_name(label) + " has " + std::to_string(split.minority.size()) +
         " row(s), duplicating instead");
    auto plan = plan_stream(cfg, sampler, label, 0xd0b1e);
    const auto counts = uniform_counts(split.minority.size(), n_to_add, plan);
    const auto ids = gather_ids(ds, split.minority);
    return generate(ds.cols(), label, ids, counts, cfg, sampler,
                    [&](std::size_t slot, std::size_t, RandomStream&, double* out, Provenance& prov) {
                        copy_row(ds.features(), split.minority[slot], out);
                        prov = {ids[slot], kNoPartner, "duplicate"};
                    });
}

}  // namespace rebalance::detail
