#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "generators.hpp"
#include "rebalance/error.hpp"
#include "rebalance/log.hpp"
#include "rebalance/samplers.hpp"

namespace rebalance {
namespace {

Dataset two_class(const Matrix& minority, std::size_t majority_rows, double majority_at = 50.0) {
    const auto m = static_cast<std::size_t>(minority.rows());
    Matrix x(static_cast<Eigen::Index>(m + majority_rows), minority.cols());
    x.topRows(minority.rows()) = minority;
    x.bottomRows(static_cast<Eigen::Index>(majority_rows)).setConstant(majority_at);
    for (std::size_t i = 0; i < majority_rows; ++i) x(static_cast<Eigen::Index>(m + i), 0) += static_cast<double>(i);
    std::vector<Label> y(m, 1);
    y.resize(m + majority_rows, 0);
    return Dataset(x, y);
}

TEST(AllocateQuotas, LargestRemainderWithIdTies) {
    const std::vector<double> w{1, 1, 1};
    const std::vector<RowId> ids{7, 3, 5};
    // 4 = 1 + 1 + 1, one extra unit to the lowest id
    EXPECT_EQ(allocate_quotas(w, ids, 4), (std::vector<std::size_t>{1, 2, 1}));
    const std::vector<double> w2{3, 1};
    const std::vector<RowId> ids2{0, 1};
    EXPECT_EQ(allocate_quotas(w2, ids2, 4), (std::vector<std::size_t>{3, 1}));
    EXPECT_EQ(allocate_quotas(w2, ids2, 5), (std::vector<std::size_t>{4, 1}));
}

TEST(AllocateQuotas, DegenerateWeightsSplitEvenly) {
    const std::vector<double> zero{0, 0, 0, 0};
    const std::vector<RowId> ids{0, 1, 2, 3};
    EXPECT_EQ(allocate_quotas(zero, ids, 8), (std::vector<std::size_t>{2, 2, 2, 2}));
    const std::vector<double> bad{std::nan(""), 1, 1, 1};
    EXPECT_EQ(allocate_quotas(bad, ids, 4), (std::vector<std::size_t>{1, 1, 1, 1}));
}

TEST(AllocateQuotas, SumsToTotal) {
    testing::Gen gen(41);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = gen.size(1, 30);
        std::vector<double> w(n);
        std::vector<RowId> ids(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = gen.coin() ? gen.real(0, 5) : 0.0;
            ids[i] = static_cast<RowId>(i);
        }
        const std::size_t total = gen.size(0, 500);
        const auto q = allocate_quotas(w, ids, total);
        std::size_t sum = 0;
        for (auto v : q) sum += v;
        EXPECT_EQ(sum, total);
    }
}

TEST(RandomOversample, SingleRowIsCopied) {
    Matrix m(1, 2);
    m << 1, 2;
    const auto ds = two_class(m, 5);
    const auto b = random_oversample(ds, 1, 3, SamplerConfig{});
    ASSERT_EQ(b.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(b.features.row(static_cast<Eigen::Index>(i)), m.row(0));
        EXPECT_EQ(b.provenance[i].base, 0);
    }
    EXPECT_EQ(b.label, 1);
}

TEST(RandomOversample, ZeroRowsGivesEmptyBatch) {
    const auto ds = testing::blobs({10, 4}, 2, 0.5, 3.0, 1);
    const auto b = random_oversample(ds, 1, 0, SamplerConfig{});
    EXPECT_EQ(b.size(), 0u);
    EXPECT_EQ(b.features.cols(), 2);
}

TEST(RandomOversample, PickFrequenciesAreUniform) {
    Matrix m(4, 1);
    m << 0, 1, 2, 3;
    const auto ds = two_class(m, 10);
    const auto b = random_oversample(ds, 1, 10000, SamplerConfig{});
    std::map<RowId, double> freq;
    for (const auto& p : b.provenance) freq[p.base] += 1.0 / 10000.0;
    ASSERT_EQ(freq.size(), 4u);
    for (const auto& [id, f] : freq) EXPECT_NEAR(f, 0.25, 0.03) << id;
}

TEST(RandomOversample, AbsentLabelIsDataError) {
    const auto ds = testing::blobs({10, 4}, 2, 0.5, 3.0, 1);
    EXPECT_THROW(random_oversample(ds, 5, 3, SamplerConfig{}), DataError);
}

TEST(Smote, IdenticalMinorityGivesIdenticalSynthetics) {
    const Matrix m = Matrix::Constant(5, 3, 0.25);
    const auto ds = two_class(m, 20);
    const auto b = smote(ds, 1, 40, SamplerConfig{});
    ASSERT_EQ(b.size(), 40u);
    for (Eigen::Index i = 0; i < b.features.rows(); ++i) EXPECT_EQ(b.features.row(i), m.row(0));
}

TEST(Smote, PartnerIsAMinorityNeighborAndRowOnSegment) {
    const auto ds = testing::blobs({200, 30}, 3, 0.7, 2.0, 8);
    SamplerConfig cfg;
    cfg.k = 4;
    const auto b = smote(ds, 1, 170, cfg);
    ASSERT_EQ(b.size(), 170u);
    const auto idx = testing::index_of(ds);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& p = b.provenance[i];
        EXPECT_EQ(p.tag, "smote");
        ASSERT_NE(p.partner, kNoPartner);
        EXPECT_EQ(ds.label(idx.at(p.base)), 1);
        EXPECT_EQ(ds.label(idx.at(p.partner)), 1);
        EXPECT_NE(p.base, p.partner);
        const auto fit = testing::fit_segment(ds.row(idx.at(p.base)), ds.row(idx.at(p.partner)),
                                              b.features.row(static_cast<Eigen::Index>(i)));
        EXPECT_LE(fit.residual, 1e-9);
        EXPECT_GE(fit.t, 0.0);
        EXPECT_LT(fit.t, 1.0);
    }
}

TEST(Smote, OrderedByBaseId) {
    const auto ds = testing::blobs({100, 20}, 2, 0.5, 2.0, 3);
    const auto b = smote(ds, 1, 80, SamplerConfig{});
    for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LE(b.provenance[i - 1].base, b.provenance[i].base);
}

TEST(Smote, SingleMinorityRowFallsBackWithWarning) {
    std::vector<std::string> warnings;
    ScopedWarningSink sink([&](std::string_view w) { warnings.emplace_back(w); });
    Matrix m(1, 2);
    m << 4, 4;
    const auto ds = two_class(m, 6);
    const auto b = smote(ds, 1, 5, SamplerConfig{});
    ASSERT_EQ(b.size(), 5u);
    for (const auto& p : b.provenance) EXPECT_EQ(p.tag, "duplicate");
    EXPECT_FALSE(warnings.empty());
}

TEST(Smote, SameSeedSameBatchDifferentSeedDifferentBatch) {
    const auto ds = testing::blobs({100, 20}, 2, 0.5, 2.0, 3);
    SamplerConfig a;
    a.seed = 11;
    SamplerConfig c = a;
    c.seed = 12;
    EXPECT_EQ(smote(ds, 1, 80, a).features, smote(ds, 1, 80, a).features);
    EXPECT_NE(smote(ds, 1, 80, a).features, smote(ds, 1, 80, c).features);
}

TEST(GaussianSmote, ZeroSigmaCopiesBase) {
    const auto ds = testing::blobs({50, 12}, 2, 0.5, 2.0, 5);
    SamplerConfig cfg;
    cfg.sigma = 0.0;
    const auto b = gaussian_smote(ds, 1, 38, cfg);
    const auto idx = testing::index_of(ds);
    for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_EQ(b.features.row(static_cast<Eigen::Index>(i)), ds.row(idx.at(b.provenance[i].base)));
    }
}

TEST(GaussianSmote, GapMoments) {
    Matrix m(2, 1);
    m << 0, 1;
    const auto ds = two_class(m, 3, 10.0);
    SamplerConfig cfg;
    cfg.k = 1;
    cfg.sigma = 0.5;
    const auto b = gaussian_smote(ds, 1, 10000, cfg);
    double sum = 0, sq = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double base = m(b.provenance[i].base, 0);
        const double partner = m(b.provenance[i].partner, 0);
        const double g = (b.features(static_cast<Eigen::Index>(i), 0) - base) / (partner - base);
        sum += g;
        sq += g * g;
    }
    const double mean = sum / 10000.0;
    const double sd = std::sqrt(sq / 10000.0 - mean * mean);
    EXPECT_GE(mean, -0.02);
    EXPECT_LE(mean, 0.02);
    EXPECT_GE(sd, 0.475);
    EXPECT_LE(sd, 0.525);
}

TEST(SmoteD, DeterministicWithoutSeed) {
    const auto ds = testing::blobs({80, 15}, 2, 0.5, 2.0, 6);
    SamplerConfig a;
    a.seed = 1;
    SamplerConfig b = a;
    b.seed = 99;
    EXPECT_EQ(smote_d(ds, 1, 65, a).features, smote_d(ds, 1, 65, b).features);
}

TEST(SmoteD, EquidistantNeighborsSplitEvenlyAtRegularFractions) {
    // base at 0 with neighbors at -1 and +1; the other two bases mirror the geometry
    Matrix m(3, 1);
    m << 0, -1, 1;
    const auto ds = two_class(m, 10, 100.0);
    SamplerConfig cfg;
    cfg.k = 2;
    const auto batch = smote_d(ds, 1, 12, cfg);
    ASSERT_EQ(batch.size(), 12u);
    std::map<std::pair<RowId, RowId>, std::vector<double>> fractions;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& p = batch.provenance[i];
        const double base = m(p.base, 0);
        const double partner = m(p.partner, 0);
        fractions[{p.base, p.partner}].push_back((batch.features(static_cast<Eigen::Index>(i), 0) - base) /
                                                  (partner - base));
    }
    // base 0: std of {1,1} is 0, so every row goes to the outer bases
    for (const auto& [key, f] : fractions) {
        const auto parts = f.size();
        for (std::size_t j = 0; j < parts; ++j) {
            EXPECT_NEAR(f[j], static_cast<double>(j + 1) / static_cast<double>(parts), 1e-12);
        }
    }
    std::size_t from0 = 0;
    for (const auto& p : batch.provenance) from0 += p.base == 0;
    EXPECT_EQ(from0, 0u);
}

TEST(Adasyn, AllMajorityVersusAllMinorityNeighborhood) {
    // base 0 has five majority neighbors (ratio 5), the bases near 50 only minority ones (ratio 0)
    Matrix x(13, 1);
    x << 0, 50, 50.01, 50.02, 50.03, 50.04, 50.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
    std::vector<Label> y{1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
    const Dataset ds(x, y);
    SamplerConfig cfg;
    cfg.k = 5;
    const auto b = adasyn(ds, 1, 4, cfg);
    ASSERT_EQ(b.size(), 4u);
    for (const auto& p : b.provenance) EXPECT_EQ(p.base, 0);
    // base 0 has no minority neighbor, so it is replicated
    for (const auto& p : b.provenance) EXPECT_EQ(p.tag, "duplicate");
}

TEST(Adasyn, NoMajorityNeighborsFallsBackToUniform) {
    const auto ds = testing::blobs({30, 30}, 2, 0.1, 50.0, 2);
    const auto b = adasyn(ds, 1, 30, SamplerConfig{});
    EXPECT_EQ(b.size(), 30u);
    std::map<RowId, std::size_t> per;
    for (const auto& p : b.provenance) ++per[p.base];
    for (const auto& [id, c] : per) EXPECT_EQ(c, 1u);
}

TEST(Adasyn, SingleBaseTakesEverything) {
    Matrix m(1, 1);
    m << 0;
    const auto ds = two_class(m, 5, 1.0);
    const auto b = adasyn(ds, 1, 7, SamplerConfig{});
    EXPECT_EQ(b.size(), 7u);
    for (const auto& p : b.provenance) EXPECT_EQ(p.base, 0);
}

TEST(Registry, SortedIdsAndLookup) {
    const auto ids = sampler_ids();
    EXPECT_EQ(ids.size(), 15u);
    EXPECT_NE(std::find(ids.begin(), ids.end(), "none"), ids.end());
    EXPECT_EQ(find_sampler("smote").display_name, "SMOTE");
    EXPECT_EQ(find_sampler("none").fn, nullptr);
    EXPECT_EQ(samplers().size(), 14u);
    EXPECT_TRUE(std::is_sorted(samplers().begin(), samplers().end(),
                               [](const SamplerInfo& a, const SamplerInfo& b) { return a.id < b.id; }));
    std::size_t slow = 0;
    for (const auto& s : samplers()) slow += !s.scalable;
    EXPECT_EQ(slow, 3u);
}

TEST(Registry, UnknownIdListsValidIds) {
    try {
        find_sampler("smoot");
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("smote"), std::string::npos);
        EXPECT_NE(msg.find("none"), std::string::npos);
    }
}

TEST(Oversample, DispatchesById) {
    const auto ds = testing::blobs({40, 10}, 2, 0.5, 2.0, 4);
    SamplerConfig cfg;
    cfg.seed = 3;
    EXPECT_EQ(oversample(ds, 1, 30, cfg, "smote").features, smote(ds, 1, 30, cfg).features);
    EXPECT_THROW(oversample(ds, 1, 30, cfg, "nope"), ConfigError);
}

}  // namespace
}  // namespace rebalance
