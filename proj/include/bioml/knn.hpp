#pragma once

#include "bioml/model.hpp"

namespace bioml {

enum class KnnMetric { Euclidean, Manhattan, Minkowski };

struct KnnParams {
  std::size_t k = 5;
  KnnMetric metric = KnnMetric::Minkowski;
  double p_exp = 3.0;  // Minkowski exponent, >= 1
};

double knn_distance(const double* a, const double* b, std::size_t p, const KnnParams& params);

// Unweighted mean of the k nearest training targets. Neighbours are ordered by
// (distance, training row index), so equal distances favour earlier rows.
class KnnModel final : public Regressor {
 public:
  KnnModel(Matrix X, Vector y, KnnParams params)
      : X_(std::move(X)), y_(std::move(y)), params_(params) {}

  std::string_view kind() const override { return "KNN"; }
  std::size_t feature_count() const override { return static_cast<std::size_t>(X_.cols()); }
  const KnnParams& params() const { return params_; }

 protected:
  double predict_row(const double* x) const override;

 private:
  Matrix X_;
  Vector y_;
  KnnParams params_;
};

// Throws InvalidK when k = 0 or k > n, Config when p_exp < 1.
std::shared_ptr<const KnnModel> knn_fit(const Matrix& X, const Vector& y, const KnnParams& params);
double knn_predict(const KnnModel& model, const Vector& x);

}  // namespace bioml
