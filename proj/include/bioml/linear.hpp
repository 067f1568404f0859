#pragma once

#include "bioml/model.hpp"

namespace bioml {

// y ≈ intercept + coefficients · x
class LinearModel final : public Regressor {
 public:
  LinearModel(std::string_view kind, double intercept, Vector coefficients)
      : kind_(kind), intercept_(intercept), coefficients_(std::move(coefficients)) {}

  std::string_view kind() const override { return kind_; }
  std::size_t feature_count() const override { return static_cast<std::size_t>(coefficients_.size()); }
  double intercept() const { return intercept_; }
  const Vector& coefficients() const { return coefficients_; }

 protected:
  double predict_row(const double* x) const override;
  Vector predict_rows(const Matrix& X) const override;

 private:
  std::string_view kind_;
  double intercept_;
  Vector coefficients_;
};

// Least squares with an unpenalized intercept. Solved on centered data with a
// complete orthogonal decomposition, so rank-deficient X gets the
// minimum-norm slope vector. Throws EmptyInput when n = 0.
std::shared_ptr<const LinearModel> ols_fit(const Matrix& X, const Vector& y);

struct RidgeParams {
  double alpha = 1.0;
  int max_iterations = 1000;  // accepted for config parity; the solve is closed form
  // Penalize coefficients of columns scaled to unit standard deviation;
  // returned coefficients are in the original units.
  bool normalize = false;
};

// argmin ||y - b0 - X b||² + alpha ||b||². Throws Config when alpha < 0.
std::shared_ptr<const LinearModel> ridge_fit(const Matrix& X, const Vector& y, const RidgeParams& params);

}  // namespace bioml
