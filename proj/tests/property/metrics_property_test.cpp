#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "generators.hpp"
#include "rebalance/metrics.hpp"

namespace rebalance {
namespace {

ConfusionMatrix random_matrix(testing::Gen& gen, std::size_t c) {
    ConfusionMatrix cm(c);
    for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = 0; j < c; ++j) cm(i, j) = gen.coin() ? gen.size(0, 50) : 0;
    }
    cm(0, 0) += 1;
    return cm;
}

void expect_same(const MetricReport& a, const MetricReport& b) {
    EXPECT_NEAR(a.av_acc, b.av_acc, 1e-12);
    EXPECT_NEAR(a.m_avg, b.m_avg, 1e-12);
    EXPECT_NEAR(a.av_fb, b.av_fb, 1e-12);
    EXPECT_NEAR(a.cba, b.cba, 1e-12);
}

TEST(MetricProperties, BoundedAndOrdered) {
    testing::Gen gen(1);
    for (int t = 0; t < 500; ++t) {
        const auto cm = random_matrix(gen, gen.size(2, 7));
        const auto r = evaluate(cm, gen.real(0.25, 4.0));
        for (double v : {r.av_acc, r.m_avg, r.av_fb, r.cba}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        double recall = 0, precision = 0;
        for (const auto& pc : r.per_class) {
            recall += pc.recall;
            precision += pc.precision;
        }
        recall /= static_cast<double>(r.per_class.size());
        precision /= static_cast<double>(r.per_class.size());
        // geometric mean never exceeds the arithmetic mean
        EXPECT_LE(r.m_avg, recall + 1e-12);
        // cm_ii / max(row, col) is at most both recall and precision
        EXPECT_LE(r.cba, recall + 1e-12);
        EXPECT_LE(r.cba, precision + 1e-12);
    }
}

TEST(MetricProperties, ClassPermutationInvariant) {
    testing::Gen gen(2);
    for (int t = 0; t < 200; ++t) {
        const std::size_t c = gen.size(2, 6);
        const auto cm = random_matrix(gen, c);
        std::vector<std::size_t> perm(c);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen.engine());
        ConfusionMatrix p(c);
        for (std::size_t i = 0; i < c; ++i) {
            for (std::size_t j = 0; j < c; ++j) p(perm[i], perm[j]) = cm(i, j);
        }
        expect_same(evaluate(cm), evaluate(p));
    }
}

TEST(MetricProperties, ScalingCountsInvariant) {
    testing::Gen gen(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t c = gen.size(2, 6);
        const auto cm = random_matrix(gen, c);
        ConfusionMatrix s(c);
        const auto f = gen.size(2, 9);
        for (std::size_t i = 0; i < c; ++i) {
            for (std::size_t j = 0; j < c; ++j) s(i, j) = cm(i, j) * f;
        }
        expect_same(evaluate(cm), evaluate(s));
    }
}

TEST(MetricProperties, DiagonalIsPerfect) {
    testing::Gen gen(4);
    for (int t = 0; t < 100; ++t) {
        const std::size_t c = gen.size(2, 6);
        ConfusionMatrix cm(c);
        for (std::size_t i = 0; i < c; ++i) cm(i, i) = gen.size(1, 40);
        const auto r = evaluate(cm, gen.real(0.5, 3));
        EXPECT_EQ(r.av_acc, 1.0);
        EXPECT_EQ(r.m_avg, 1.0);
        EXPECT_NEAR(r.av_fb, 1.0, 1e-15);
        EXPECT_EQ(r.cba, 1.0);
    }
}

TEST(MetricProperties, ConfusionCountsEveryPair) {
    testing::Gen gen(5);
    for (int t = 0; t < 100; ++t) {
        const std::size_t c = gen.size(2, 5);
        const std::size_t n = gen.size(1, 200);
        std::vector<Label> truth(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = static_cast<Label>(gen.size(0, c - 1));
            pred[i] = static_cast<Label>(gen.size(0, c - 1));
        }
        const auto cm = confusion(truth, pred, c);
        EXPECT_EQ(cm.total(), n);
        for (std::size_t i = 0; i < c; ++i) {
            const auto expected = static_cast<std::uint64_t>(std::count(truth.begin(), truth.end(), static_cast<Label>(i)));
            EXPECT_EQ(cm.row_sum(i), expected);
        }
    }
}

}  // namespace
}  // namespace rebalance
