#include "bioml/linear.hpp"

#include <cmath>

#include "bioml/error.hpp"

namespace bioml {

double LinearModel::predict_row(const double* x) const {
  double s = intercept_;
  for (Eigen::Index j = 0; j < coefficients_.size(); ++j) s += coefficients_[j] * x[j];
  return s;
}

Vector LinearModel::predict_rows(const Matrix& X) const {
  return (X * coefficients_).array() + intercept_;
}

namespace {

void check_xy(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size())
    throw Error(ErrorCode::LengthMismatch, "X has " + std::to_string(X.rows()) + " rows, y has " +
                                               std::to_string(y.size()));
  if (X.rows() == 0) throw Error(ErrorCode::EmptyInput, "cannot fit on zero rows");
}

// Solves the centered least-squares problem [Xc; sqrt(alpha) D] b = [yc; 0].
std::shared_ptr<const LinearModel> fit_centered(std::string_view kind, const Matrix& X, const Vector& y,
                                                double alpha, const Vector& penalty_scale) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  Eigen::MatrixXd A(n + (alpha > 0.0 ? p : 0), p);
  Vector rhs = Vector::Zero(A.rows());
  A.topRows(n) = X.rowwise() - x_mean;
  rhs.head(n) = y.array() - y_mean;
  if (alpha > 0.0) {
    A.bottomRows(p).setZero();
    for (Eigen::Index j = 0; j < p; ++j) A(n + j, j) = std::sqrt(alpha) * penalty_scale[j];
  }
  Vector coef = Vector::Zero(p);
  if (p > 0) coef = A.completeOrthogonalDecomposition().solve(rhs);
  const double intercept = y_mean - x_mean.dot(coef);
  return std::make_shared<LinearModel>(kind, intercept, std::move(coef));
}

}  // namespace

std::shared_ptr<const LinearModel> ols_fit(const Matrix& X, const Vector& y) {
  check_xy(X, y);
  return fit_centered("LinearRegression", X, y, 0.0, Vector::Ones(X.cols()));
}

std::shared_ptr<const LinearModel> ridge_fit(const Matrix& X, const Vector& y, const RidgeParams& params) {
  check_xy(X, y);
  if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha))
    throw Error(ErrorCode::Config, "ridge alpha must be finite and >= 0");
  Vector scale = Vector::Ones(X.cols());
  if (params.normalize) {
    // Penalizing b_j * s_j is the same as penalizing the coefficient of column j / s_j.
    const Eigen::RowVectorXd mean = X.colwise().mean();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double sd = std::sqrt((X.col(j).array() - mean[j]).square().mean());
      scale[j] = sd > 0.0 ? sd : 1.0;
    }
  }
  return fit_centered("Ridge", X, y, params.alpha, scale);
}

}  // namespace bioml
