#pragma once

#include "rebalance/dataset.hpp"

namespace rebalance {

/// Affine least-squares model; weights hold one coefficient per feature, intercept last.
struct PropensityModel {
    Vector weights;

    double predict(const RowVector& x) const;
    Vector predict(const Matrix& x) const;
};

inline constexpr double kRidge = 1e-8;

/// Least squares of y on [x, 1] through the damped normal equations.
PropensityModel fit_least_squares(const Matrix& x, const Vector& y, double ridge = kRidge);

/// Regresses the 0/1 indicator of minority membership on the features. Throws DataError for n == 0.
PropensityModel fit_propensity(const Dataset& ds, Label minority_label);

}  // namespace rebalance
