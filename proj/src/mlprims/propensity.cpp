#include "rebalance/propensity.hpp"

#include <Eigen/Cholesky>

#include "rebalance/error.hpp"

namespace rebalance {

double PropensityModel::predict(const RowVector& x) const {
    const auto d = weights.size() - 1;
    return x.dot(weights.head(d)) + weights(d);
}

Vector PropensityModel::predict(const Matrix& x) const {
    const auto d = weights.size() - 1;
    return (x * weights.head(d)).array() + weights(d);
}

PropensityModel fit_least_squares(const Matrix& x, const Vector& y, double ridge) {
    if (x.rows() == 0) throw DataError("least squares: no rows");
    if (y.size() != x.rows()) throw DataError("least squares: target length mismatch");
    Eigen::MatrixXd a(x.rows(), x.cols() + 1);
    a.leftCols(x.cols()) = x;
    a.col(x.cols()).setOnes();
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += ridge;
    PropensityModel model;
    model.weights = gram.ldlt().solve(a.transpose() * y);
    return model;
}

PropensityModel fit_propensity(const Dataset& ds, Label minority_label) {
    if (ds.empty()) throw DataError("propensity: empty dataset");
    Vector y(static_cast<Eigen::Index>(ds.rows()));
    for (std::size_t i = 0; i < ds.rows(); ++i) y(static_cast<Eigen::Index>(i)) = ds.label(i) == minority_label;
    return fit_least_squares(ds.features(), y);
}

}  // namespace rebalance
