#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rebalance/dataset.hpp"
#include "rebalance/neighbors.hpp"
#include "rebalance/parallel.hpp"
#include "rebalance/random.hpp"
#include "rebalance/samplers.hpp"

namespace rebalance::detail {

/// Row positions of the minority class and of everything else.
struct ClassSplit {
    std::vector<std::size_t> minority;
    std::vector<std::size_t> majority;
};

/// Throws DataError when the label has no rows.
ClassSplit split_classes(const Dataset& ds, Label minority_label);

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> idx);
std::vector<RowId> gather_ids(const Dataset& ds, std::span<const std::size_t> idx);

std::uint64_t sampler_key(std::string_view sampler);
RandomStream plan_stream(const SamplerConfig& cfg, std::string_view sampler, Label label, std::uint64_t purpose = 0);
RandomStream task_stream(const SamplerConfig& cfg, std::string_view sampler, Label label, RowId base,
                         std::uint64_t ordinal);

/// Distributes total draws uniformly over n slots.
std::vector<std::size_t> uniform_counts(std::size_t n, std::size_t total, RandomStream& plan);
/// Distributes total draws over slots with probability proportional to weights.
std::vector<std::size_t> weighted_counts(std::span<const double> weights, std::size_t total, RandomStream& plan);
/// Index drawn with probability proportional to weights (cumulative search).
std::size_t weighted_index(std::span<const double> cumulative, RandomStream& stream);

SyntheticBatch empty_batch(std::size_t dims, Label label);

/// Random duplication used when the minority class is too small for a neighbor-based method.
SyntheticBatch duplicate_fallback(const Dataset& ds, Label label, const ClassSplit& split, std::size_t n_to_add,
                                  const SamplerConfig& cfg, std::string_view sampler);

/// base + gap * (partner - base), written to out.
inline void interpolate(const Matrix& x, std::size_t base, std::size_t partner, double gap, double* out) {
    const auto d = static_cast<std::size_t>(x.cols());
    const double* b = x.data() + base * d;
    const double* p = x.data() + partner * d;
    for (std::size_t j = 0; j < d; ++j) out[j] = b[j] + gap * (p[j] - b[j]);
}

inline void copy_row(const Matrix& x, std::size_t row, double* out) {
    const auto d = static_cast<std::size_t>(x.cols());
    std::copy_n(x.data() + row * d, d, out);
}

/**
 * Runs gen(slot, ordinal, stream, out, provenance) once per requested row.
 * Rows come out ordered by (base row id, ordinal); each call gets its own
 * stream keyed on the base row id and ordinal.
 */
template <class Gen>
SyntheticBatch generate(std::size_t dims, Label label, std::span<const RowId> base_ids,
                        std::span<const std::size_t> counts, const SamplerConfig& cfg, std::string_view sampler,
                        Gen&& gen) {
    std::vector<std::size_t> order(base_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return base_ids[a] < base_ids[b]; });
    std::vector<std::size_t> offsets(order.size() + 1, 0);
    for (std::size_t i = 0; i < order.size(); ++i) offsets[i + 1] = offsets[i] + counts[order[i]];
    const std::size_t total = offsets.back();

    SyntheticBatch batch;
    batch.label = label;
    batch.features.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(dims));
    batch.provenance.resize(total);
    parallel_for(total, [&](std::size_t i) {
        const auto pos = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), i) -
                                                  offsets.begin()) - 1;
        const std::size_t slot = order[pos];
        const std::size_t ordinal = i - offsets[pos];
        RandomStream stream = task_stream(cfg, sampler, label, base_ids[slot], ordinal);
        gen(slot, ordinal, stream, batch.features.data() + i * dims, batch.provenance[i]);
    });
    return batch;
}

/// Clamps a neighbor count to the number of other rows available.
inline std::size_t clamp_k(std::size_t k, std::size_t reference_size) {
    return std::max<std::size_t>(1, std::min(k, reference_size > 0 ? reference_size - 1 : 0));
}

}  // namespace rebalance::detail
