#include <gtest/gtest.h>

#include <cmath>

#include "rebalance/error.hpp"
#include "rebalance/metrics.hpp"

namespace rebalance {
namespace {

TEST(Confusion, Examples) {
    const std::vector<Label> t{0, 1};
    EXPECT_EQ(confusion(t, t), ConfusionMatrix::from_rows({{1, 0}, {0, 1}}));
    const std::vector<Label> t2{0, 0};
    const std::vector<Label> p2{1, 1};
    EXPECT_EQ(confusion(t2, p2), ConfusionMatrix::from_rows({{0, 2}, {0, 0}}));
}

TEST(Confusion, Errors) {
    const std::vector<Label> a{0, 1};
    const std::vector<Label> b{0};
    EXPECT_THROW(confusion(a, b), DataError);
    const std::vector<Label> c{0, 2};
    EXPECT_THROW(confusion(a, c, 2), DataError);
    EXPECT_THROW(ConfusionMatrix::from_rows({{1, 2}, {3}}), DataError);
}

TEST(Evaluate, TwoByTwoFixture) {
    const auto r = evaluate(ConfusionMatrix::from_rows({{3, 1}, {2, 4}}), 1.0);
    EXPECT_NEAR(r.av_acc, 0.70000, 1e-5);
    EXPECT_NEAR(r.m_avg, 0.70711, 1e-5);
    EXPECT_NEAR(r.av_fb, 0.69697, 1e-5);
    EXPECT_NEAR(r.cba, 0.63333, 1e-5);
    ASSERT_EQ(r.per_class.size(), 2u);
    EXPECT_DOUBLE_EQ(r.per_class[0].precision, 0.6);
    EXPECT_DOUBLE_EQ(r.per_class[0].recall, 0.75);
    EXPECT_DOUBLE_EQ(r.per_class[1].accuracy, 0.7);
}

TEST(Evaluate, PerfectClassifier) {
    const auto r = evaluate(ConfusionMatrix::from_rows({{5, 0}, {0, 5}}));
    EXPECT_EQ(r.av_acc, 1.0);
    EXPECT_EQ(r.m_avg, 1.0);
    EXPECT_EQ(r.av_fb, 1.0);
    EXPECT_EQ(r.cba, 1.0);
}

TEST(Evaluate, ZeroDiagonalGivesZeroGeometricMean) {
    const auto r = evaluate(ConfusionMatrix::from_rows({{0, 4, 0}, {0, 5, 1}, {0, 2, 7}}));
    EXPECT_EQ(r.m_avg, 0.0);
    EXPECT_EQ(r.per_class[0].precision, 0.0);
    EXPECT_EQ(r.per_class[0].f_beta, 0.0);
}

TEST(Evaluate, AbsentClassTermsAreZero) {
    // class 1 never occurs and is never predicted
    const auto r = evaluate(ConfusionMatrix::from_rows({{4, 0}, {0, 0}}));
    EXPECT_EQ(r.per_class[1].recall, 0.0);
    EXPECT_EQ(r.per_class[1].precision, 0.0);
    EXPECT_DOUBLE_EQ(r.cba, 0.5);
    EXPECT_EQ(r.m_avg, 0.0);
}

TEST(Evaluate, BetaWeightsRecall) {
    const auto cm = ConfusionMatrix::from_rows({{3, 1}, {2, 4}});
    const auto r2 = evaluate(cm, 2.0);
    // class 0: p = 0.6, r = 0.75; class 1: p = 0.8, r = 2/3
    auto f = [](double p, double r, double b) { return (1 + b * b) * p * r / (b * b * p + r); };
    EXPECT_NEAR(r2.av_fb, 0.5 * (f(0.6, 0.75, 2) + f(0.8, 2.0 / 3.0, 2)), 1e-12);
    EXPECT_EQ(r2.beta, 2.0);
}

TEST(Evaluate, EmptyMatrixIsAnError) {
    EXPECT_THROW(evaluate(ConfusionMatrix(2)), DataError);
    EXPECT_THROW(evaluate(ConfusionMatrix(0)), DataError);
}

}  // namespace
}  // namespace rebalance
