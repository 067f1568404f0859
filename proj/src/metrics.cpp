#include "bioml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "bioml/error.hpp"

namespace bioml {

namespace {

void check_lengths(const Vector& pred, const Vector& actual) {
  if (pred.size() != actual.size())
    throw Error(ErrorCode::LengthMismatch, "prediction length " + std::to_string(pred.size()) +
                                               " vs actual length " + std::to_string(actual.size()));
}

void check_nonempty(const Vector& v) {
  if (v.size() == 0) throw Error(ErrorCode::EmptyInput, "metric on empty vectors");
}

}  // namespace

double pearson_r(const Vector& pred, const Vector& actual) {
  check_lengths(pred, actual);
  const Eigen::Index n = pred.size();
  if (n < 2) throw Error(ErrorCode::ConstantVector, "correlation needs at least two points");
  const double mp = pred.mean();
  const double ma = actual.mean();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dp = pred[i] - mp;
    const double da = actual[i] - ma;
    sxy += dp * da;
    sxx += dp * dp;
    syy += da * da;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ConstantVector, "correlation of a constant vector");
  const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return std::clamp(r, -1.0, 1.0);
}

double r_squared(const Vector& pred, const Vector& actual) {
  const double r = pearson_r(pred, actual);
  return r * r;
}

double rmse(const Vector& pred, const Vector& actual) {
  check_lengths(pred, actual);
  check_nonempty(pred);
  return std::sqrt((pred - actual).squaredNorm() / static_cast<double>(pred.size()));
}

double mae(const Vector& pred, const Vector& actual) {
  check_lengths(pred, actual);
  check_nonempty(pred);
  return (pred - actual).cwiseAbs().sum() / static_cast<double>(pred.size());
}

double negative_mae(const Vector& pred, const Vector& actual) { return -mae(pred, actual); }

double coefficient_of_determination(const Vector& pred, const Vector& actual) {
  check_lengths(pred, actual);
  check_nonempty(pred);
  const double sst = (actual.array() - actual.mean()).square().sum();
  if (sst == 0.0) throw Error(ErrorCode::ConstantVector, "actual values are constant");
  return 1.0 - (pred - actual).squaredNorm() / sst;
}

MetricTriple score(const Vector& pred, const Vector& actual) {
  return {r_squared(pred, actual), rmse(pred, actual), mae(pred, actual)};
}

namespace {

template <typename F>
MetricCell cell(F f) {
  try {
    return {f(), {}};
  } catch (const Error& e) {
    return {0.0, std::string(to_string(e.code()))};
  }
}

}  // namespace

MetricCells score_cells(const Vector& pred, const Vector& actual) {
  return {cell([&] { return r_squared(pred, actual); }), cell([&] { return rmse(pred, actual); }),
          cell([&] { return mae(pred, actual); })};
}

MetricCells failed_cells(const std::string& failure) {
  return {{0.0, failure}, {0.0, failure}, {0.0, failure}};
}

std::string format_value(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_cell(const MetricCell& c) { return c.ok() ? format_value(c.value) : "FAIL(" + c.failure + ")"; }

}  // namespace bioml
