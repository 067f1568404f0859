#include "bioml/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "bioml/error.hpp"

namespace bioml {

namespace {

// Monotone in the distance: the sum before the final root is taken.
double rank_key(const double* a, const double* b, std::size_t p, const KnnParams& params) {
  double s = 0.0;
  switch (params.metric) {
    case KnnMetric::Euclidean:
      for (std::size_t j = 0; j < p; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
      return s;
    case KnnMetric::Manhattan:
      for (std::size_t j = 0; j < p; ++j) s += std::abs(a[j] - b[j]);
      return s;
    case KnnMetric::Minkowski:
      if (params.p_exp == 3.0) {
        for (std::size_t j = 0; j < p; ++j) {
          const double t = std::abs(a[j] - b[j]);
          s += t * t * t;
        }
      } else {
        for (std::size_t j = 0; j < p; ++j) s += std::pow(std::abs(a[j] - b[j]), params.p_exp);
      }
      return s;
  }
  return s;
}

}  // namespace

double knn_distance(const double* a, const double* b, std::size_t p, const KnnParams& params) {
  const double s = rank_key(a, b, p, params);
  switch (params.metric) {
    case KnnMetric::Euclidean: return std::sqrt(s);
    case KnnMetric::Manhattan: return s;
    case KnnMetric::Minkowski: return std::pow(s, 1.0 / params.p_exp);
  }
  return s;
}

double KnnModel::predict_row(const double* x) const {
  const std::size_t n = static_cast<std::size_t>(X_.rows());
  const auto query = Eigen::Map<const Eigen::RowVectorXd>(x, X_.cols());
  const auto diff = (X_.rowwise() - query).array().abs();
  Vector key;
  switch (params_.metric) {
    case KnnMetric::Euclidean: key = diff.square().rowwise().sum(); break;
    case KnnMetric::Manhattan: key = diff.rowwise().sum(); break;
    case KnnMetric::Minkowski:
      key = params_.p_exp == 3.0 ? Vector(diff.cube().rowwise().sum()) : Vector(diff.pow(params_.p_exp).rowwise().sum());
      break;
  }
  std::vector<std::pair<double, std::size_t>> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = {key[static_cast<Eigen::Index>(i)], i};
  const auto k = static_cast<std::ptrdiff_t>(params_.k);
  std::partial_sort(d.begin(), d.begin() + k, d.end());
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < k; ++i) s += y_[static_cast<Eigen::Index>(d[static_cast<std::size_t>(i)].second)];
  return s / static_cast<double>(k);
}

std::shared_ptr<const KnnModel> knn_fit(const Matrix& X, const Vector& y, const KnnParams& params) {
  if (X.rows() != y.size())
    throw Error(ErrorCode::LengthMismatch, "X has " + std::to_string(X.rows()) + " rows, y has " +
                                               std::to_string(y.size()));
  if (params.k == 0 || params.k > static_cast<std::size_t>(X.rows()))
    throw Error(ErrorCode::InvalidK,
                "k=" + std::to_string(params.k) + " with " + std::to_string(X.rows()) + " training rows");
  if (params.metric == KnnMetric::Minkowski && !(params.p_exp >= 1.0))
    throw Error(ErrorCode::Config, "Minkowski exponent must be >= 1");
  return std::make_shared<KnnModel>(X, y, params);
}

double knn_predict(const KnnModel& model, const Vector& x) { return model.predict(x); }

}  // namespace bioml
