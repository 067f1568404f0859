#pragma once

#include <string>

#include "bioml/types.hpp"

namespace bioml {

// Reported R² is the square of the Pearson correlation between predictions
// and actual values. `coefficient_of_determination` (1 - SSE/SST) is kept as
// an auxiliary number.
struct MetricTriple {
  double r2 = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
};

// Throws LengthMismatch, or ConstantVector when n < 2 or either side is constant.
double pearson_r(const Vector& pred, const Vector& actual);
double r_squared(const Vector& pred, const Vector& actual);
// Divisor n. LengthMismatch; EmptyInput when n = 0.
double rmse(const Vector& pred, const Vector& actual);
double mae(const Vector& pred, const Vector& actual);
double negative_mae(const Vector& pred, const Vector& actual);
// ConstantVector when actual is constant.
double coefficient_of_determination(const Vector& pred, const Vector& actual);

MetricTriple score(const Vector& pred, const Vector& actual);

// One table cell: a value, or the name of the error that prevented it.
struct MetricCell {
  double value = 0.0;
  std::string failure;

  bool ok() const { return failure.empty(); }
};

struct MetricCells {
  MetricCell r2;
  MetricCell rmse;
  MetricCell mae;
};

// Each metric is computed on its own, so a constant vector only fails R².
MetricCells score_cells(const Vector& pred, const Vector& actual);
MetricCells failed_cells(const std::string& failure);

// 6 significant digits ("%.6g"); non-finite values print as nan/inf.
std::string format_value(double value);
// format_value, or FAIL(<code>) for a failed cell.
std::string format_cell(const MetricCell& cell);

}  // namespace bioml
