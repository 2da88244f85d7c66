#include "common.hpp"

namespace rebalance {

SyntheticBatch random_oversample(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                                 const SamplerConfig& cfg) {
    constexpr std::string_view kId = "random_oversample";
    const auto split = detail::split_classes(ds, minority_label);
    auto plan = detail::plan_stream(cfg, kId, minority_label);
    const auto counts = detail::uniform_counts(split.minority.size(), n_to_add, plan);
    const auto ids = detail::gather_ids(ds, split.minority);
    return detail::generate(ds.cols(), minority_label, ids, counts, cfg, kId,
                            [&](std::size_t slot, std::size_t, RandomStream&, double* out, Provenance& prov) {
                                detail::copy_row(ds.features(), split.minority[slot], out);
                                prov = {ids[slot], kNoPartner, std::string(kId)};
                            });
}

}  // namespace rebalance
