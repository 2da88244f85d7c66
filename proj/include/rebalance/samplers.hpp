#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rebalance/dataset.hpp"
#include "rebalance/sampler_config.hpp"

namespace rebalance {

inline constexpr RowId kNoPartner = -1;

/// Where one synthetic row came from.
struct Provenance {
    RowId base = kNoPartner;
    RowId partner = kNoPartner;  ///< kNoPartner when the row is not an interpolation
    std::string tag;             ///< sampler id, or "duplicate" for fallback copies

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Synthetic rows for one minority class, ordered by (base row id, ordinal).
struct SyntheticBatch {
    Matrix features;
    Label label = 0;
    std::vector<Provenance> provenance;

    std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
};

/**
 * Every sampler below produces exactly n_to_add rows labeled minority_label.
 *
 * Shared behavior: a label absent from ds throws DataError; a minority
 * class with fewer than two rows falls back to random duplication with a
 * warning; neighbor counts are clamped to the rows available. Samplers
 * whose filter leaves no seed rows throw EmptySeedSet.
 */
SyntheticBatch random_oversample(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch smote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch gaussian_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch smote_d(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch adasyn(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch borderline_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch safe_level_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch cluster_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch kmeans_smote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch ccr(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch nras(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch ans(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch mwmote(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);
SyntheticBatch rbo(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);

// ---------------------------------------------------------------------------
// Registry

/// Algorithmic building blocks of a sampler.
struct ComponentTraits {
    int knn_count = 0;
    bool kmeans = false;
    bool dependent_loop = false;
    bool probability = false;
    bool linear_regression = false;
    bool radius_neighbors = false;
    bool quadratic = false;  ///< at least O(n^2)
};

using SamplerFn = SyntheticBatch (*)(const Dataset&, Label, std::size_t, const SamplerConfig&);

struct SamplerInfo {
    std::string_view id;
    std::string_view display_name;
    SamplerFn fn;  ///< null for "none"
    ComponentTraits traits;
    bool scalable;  ///< false for the three methods too slow for full experiments
};

/// All samplers, sorted by id, excluding "none".
std::span<const SamplerInfo> samplers();
/// Includes "none". Throws ConfigError listing valid ids for an unknown id.
const SamplerInfo& find_sampler(std::string_view id);
std::vector<std::string> sampler_ids();

SyntheticBatch oversample(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg,
                          std::string_view sampler_id);

/**
 * Raises every class to the majority count. Classes are processed in label
 * order against the fixed initial majority count; synthetic rows get fresh
 * row ids and follow the original rows. When a seed filter comes up empty
 * the class is topped up by random_oversample with a warning. For "ccr" the
 * original rows are replaced by the cleaned ones.
 *
 * Throws DataError for a dataset with fewer than two classes.
 */
Dataset transform(const Dataset& ds, const SamplerConfig& cfg, std::string_view sampler_id);

// ---------------------------------------------------------------------------
// Building blocks, exposed for inspection

/**
 * Splits total into integer parts proportional to weights: floors, then one
 * extra unit to the largest fractional parts (ties by ascending id). A zero
 * or non-finite weight sum falls back to equal weights.
 */
std::vector<std::size_t> allocate_quotas(std::span<const double> weights, std::span<const RowId> ids,
                                         std::size_t total);

/// Minority rows whose k-neighborhood over all of ds holds between k/2 and k-1 other-class rows.
std::vector<RowId> borderline_danger_set(const Dataset& ds, Label minority_label, const SamplerConfig& cfg);

/// Admissible gap range for Safe Level SMOTE given the two safe levels.
struct GapInterval {
    double lo = 0.0;
    double hi = 1.0;
    bool rejected = false;  ///< both safe levels zero: the draw yields nothing
};
GapInterval safe_level_gap_interval(std::size_t safe_level_base, std::size_t safe_level_partner);

struct KMeansSmoteCluster {
    std::size_t minority_count = 0;
    std::size_t majority_count = 0;
    double imbalance_ratio = 0.0;
    bool kept = false;
    double average_distance = 0.0;
    double weight = 0.0;
    std::size_t quota = 0;
    std::vector<RowId> minority_ids;
};
std::vector<KMeansSmoteCluster> kmeans_smote_plan(const Dataset& ds, Label minority_label, std::size_t n_to_add,
                                                  const SamplerConfig& cfg);

/// Radius reached by spending `energy` over majority points at the given ascending distances.
double ccr_find_radius(std::span<const double> sorted_majority_distances, double energy,
                       std::size_t max_iterations = 64);

struct CcrResult {
    Dataset cleaned;  ///< ds with majority rows pushed out of every radius
    SyntheticBatch batch;
    std::vector<RowId> minority_ids;
    std::vector<double> radii;  ///< parallel to minority_ids
    std::vector<RowId> moved_ids;
    std::vector<RowId> boundary_ids;  ///< parallel to moved_ids: the minority row whose boundary it now lies on
};
CcrResult ccr_resample(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);

/// Minority rows kept by the NRAS neighbor and propensity filters.
std::vector<RowId> nras_kept_set(const Dataset& ds, Label minority_label, const SamplerConfig& cfg);

struct AnsPlan {
    std::vector<RowId> minority_ids;
    std::vector<double> closest_minority_distance;
    std::vector<std::size_t> out_border;
    std::size_t c = 0;
    std::vector<RowId> pused;
    double radius = 0.0;
    std::vector<std::size_t> neighbor_counts;  ///< parallel to pused
    std::vector<std::size_t> quotas;           ///< parallel to pused
};
AnsPlan ans_plan(const Dataset& ds, Label minority_label, std::size_t n_to_add, const SamplerConfig& cfg);

/// Closeness factor between a borderline majority row y and a minority row x.
double mwmote_closeness(const RowVector& y, const RowVector& x, const SamplerConfig& cfg);

struct MwmoteWeights {
    std::vector<RowId> sminf;
    std::vector<RowId> sbmaj;
    std::vector<RowId> simin;
    std::vector<double> selection_weight;  ///< parallel to simin
    std::vector<double> probability;       ///< parallel to simin
};
MwmoteWeights mwmote_weights(const Dataset& ds, Label minority_label, const SamplerConfig& cfg);

/// Majority potential minus minority potential at x, using L1 distance.
double rbo_phi(const RowVector& x, const Dataset& ds, Label minority_label, double gamma);

}  // namespace rebalance
