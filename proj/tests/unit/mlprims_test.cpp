#include <gtest/gtest.h>

#include <limits>

#include "generators.hpp"
#include "rebalance/error.hpp"
#include "rebalance/kmeans.hpp"
#include "rebalance/log.hpp"
#include "rebalance/propensity.hpp"

namespace rebalance {
namespace {

TEST(KMeans, FourPointsTwoClustersMatchExhaustivePartition) {
    Matrix pts(4, 2);
    pts << 0, 0, 0.1, 0, 10, 0, 10.1, 0;
    // every 2-partition, keep the lowest inertia
    double best = std::numeric_limits<double>::infinity();
    Matrix best_centroids;
    for (int mask = 1; mask < 15; ++mask) {
        Matrix c = Matrix::Zero(2, 2);
        int n[2] = {0, 0};
        for (int i = 0; i < 4; ++i) {
            const int g = (mask >> i) & 1;
            c.row(g) += pts.row(i);
            ++n[g];
        }
        c.row(0) /= n[0];
        c.row(1) /= n[1];
        double inertia = 0;
        for (int i = 0; i < 4; ++i) inertia += (pts.row(i) - c.row((mask >> i) & 1)).squaredNorm();
        if (inertia < best) {
            best = inertia;
            best_centroids = c;
        }
    }
    RandomStream rng(1, 2);
    const auto model = kmeans_fit(pts, 2, 20, rng);
    Matrix got = model.centroids;
    if (got(0, 0) > got(1, 0)) got.row(0).swap(got.row(1));
    if (best_centroids(0, 0) > best_centroids(1, 0)) best_centroids.row(0).swap(best_centroids.row(1));
    EXPECT_NEAR((got - best_centroids).cwiseAbs().maxCoeff(), 0.0, 1e-9);
    EXPECT_NEAR(got(0, 0), 0.05, 1e-9);
    EXPECT_NEAR(got(1, 0), 10.05, 1e-9);
    EXPECT_NEAR(model.inertia, best, 1e-12);
}

TEST(KMeans, SingleClusterIsMean) {
    testing::Gen gen(3);
    const Matrix pts = gen.matrix(40, 3);
    RandomStream rng(0, 0);
    const auto model = kmeans_fit(pts, 1, 20, rng);
    EXPECT_NEAR((model.centroids.row(0) - pts.colwise().mean()).norm(), 0.0, 1e-12);
}

TEST(KMeans, KEqualsNHasZeroInertia) {
    testing::Gen gen(4);
    const Matrix pts = gen.matrix(6, 2);
    RandomStream rng(0, 1);
    EXPECT_NEAR(kmeans_fit(pts, 6, 20, rng).inertia, 0.0, 1e-20);
}

TEST(KMeans, ClampsKWithWarning) {
    std::vector<std::string> warnings;
    ScopedWarningSink sink([&](std::string_view w) { warnings.emplace_back(w); });
    Matrix pts(2, 1);
    pts << 0, 1;
    RandomStream rng(0, 1);
    const auto model = kmeans_fit(pts, 5, 20, rng);
    EXPECT_EQ(model.centroids.rows(), 2);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(KMeans, Errors) {
    RandomStream rng(0, 1);
    EXPECT_THROW(kmeans_fit(Matrix::Zero(3, 1), 0, 20, rng), ConfigError);
    EXPECT_THROW(kmeans_fit(Matrix::Zero(3, 1), 1, 0, rng), ConfigError);
    EXPECT_THROW(kmeans_fit(Matrix(0, 1), 1, 20, rng), DataError);
}

TEST(KMeans, InertiaTraceNonIncreasingAndDeterministic) {
    const auto ds = testing::blobs({60, 50, 40, 30}, 3, 0.6, 2.0, 9);
    RandomStream a(5, 6);
    RandomStream b(5, 6);
    const auto m1 = kmeans_fit(ds, 4, 50, a);
    const auto m2 = kmeans_fit(ds, 4, 50, b);
    EXPECT_EQ(m1.centroids, m2.centroids);
    for (std::size_t t = 1; t < m1.inertia_trace.size(); ++t) {
        EXPECT_LE(m1.inertia_trace[t], m1.inertia_trace[t - 1] + 1e-12);
    }
    EXPECT_EQ(m1.assignments, kmeans_assign(m1, ds));
}

TEST(KMeansAssign, AtCentroidAndTies) {
    KMeansModel model;
    model.centroids.resize(2, 1);
    model.centroids << -1, 1;
    Matrix pts(3, 1);
    pts << 1, 0, -1;
    EXPECT_EQ(kmeans_assign(model, pts), (std::vector<std::size_t>{1, 0, 0}));
}

TEST(KMeansAssign, MatchesScan) {
    testing::Gen gen(12);
    KMeansModel model;
    model.centroids = gen.matrix(5, 3);
    const Matrix pts = gen.matrix(100, 3);
    const auto got = kmeans_assign(model, pts);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        std::size_t best = 0;
        for (Eigen::Index c = 1; c < 5; ++c) {
            if ((pts.row(i) - model.centroids.row(c)).squaredNorm() <
                (pts.row(i) - model.centroids.row(static_cast<Eigen::Index>(best))).squaredNorm()) {
                best = static_cast<std::size_t>(c);
            }
        }
        EXPECT_EQ(got[static_cast<std::size_t>(i)], best);
    }
    EXPECT_THROW(kmeans_assign(model, Matrix::Zero(2, 4)), DataError);
}

TEST(Propensity, InterpolatesTwoPoints) {
    Matrix x(2, 1);
    x << 0, 1;
    Vector y(2);
    y << 0, 1;
    const auto m = fit_least_squares(x, y);
    EXPECT_NEAR(m.predict(RowVector(RowVector::Constant(1, 0.0))), 0.0, 1e-6);
    EXPECT_NEAR(m.predict(RowVector(RowVector::Constant(1, 1.0))), 1.0, 1e-6);
}

TEST(Propensity, ConstantTarget) {
    testing::Gen gen(1);
    const Matrix x = gen.matrix(30, 2);
    const auto m = fit_least_squares(x, Vector::Ones(30));
    EXPECT_NEAR((m.predict(x).array() - 1.0).abs().maxCoeff(), 0.0, 1e-9);
}

TEST(Propensity, MatchesPseudoinverse) {
    testing::Gen gen(77);
    const Matrix x = gen.matrix(50, 3);
    Vector y(50);
    for (int i = 0; i < 50; ++i) y(i) = gen.real(-2, 2);
    Eigen::MatrixXd a(50, 4);
    a.leftCols(3) = x;
    a.col(3).setOnes();
    const Eigen::VectorXd w = a.completeOrthogonalDecomposition().solve(y);
    const auto m = fit_least_squares(x, y);
    EXPECT_NEAR((m.predict(x) - a * w).cwiseAbs().maxCoeff(), 0.0, 1e-6);
    // residuals orthogonal to every column and the intercept
    const Vector r = y - m.predict(x);
    EXPECT_NEAR((a.transpose() * r).cwiseAbs().maxCoeff(), 0.0, 1e-6);
}

TEST(Propensity, IndicatorRegressionAndErrors) {
    const auto ds = testing::blobs({30, 10}, 2, 0.5, 3.0, 2);
    const auto m = fit_propensity(ds, 1);
    EXPECT_EQ(m.weights.size(), 3);
    const Vector p = m.predict(ds.features());
    EXPECT_GT(p.tail(10).mean(), p.head(30).mean());
    EXPECT_THROW(fit_propensity(Dataset(Matrix(0, 2), {}), 0), DataError);
}

}  // namespace
}  // namespace rebalance
