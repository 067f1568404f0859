#include "bioml/model.hpp"

#include "bioml/error.hpp"

namespace bioml {

double Regressor::predict(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != feature_count())
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(feature_count()) + " features, got " +
                                               std::to_string(x.size()));
  return predict_row(x.data());
}

Vector Regressor::predict(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != feature_count())
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(feature_count()) + " features, got " +
                                               std::to_string(X.cols()));
  return predict_rows(X);
}

Vector Regressor::predict_rows(const Matrix& X) const {
  Vector out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = predict_row(X.row(i).data());
  return out;
}

}  // namespace bioml
