#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "bioml/types.hpp"

namespace bioml {

// Uniform predict contract shared by every trained regressor. Fitted models
// are immutable; predict is deterministic and thread-safe.
class Regressor {
 public:
  virtual ~Regressor() = default;

  virtual std::string_view kind() const = 0;
  virtual std::size_t feature_count() const = 0;

  // Throws LengthMismatch when x.size() != feature_count().
  double predict(const Vector& x) const;
  // One prediction per row; throws LengthMismatch on a column count mismatch.
  Vector predict(const Matrix& X) const;

 protected:
  // `x` holds feature_count() values.
  virtual double predict_row(const double* x) const = 0;
  virtual Vector predict_rows(const Matrix& X) const;
};

using FittedModel = std::shared_ptr<const Regressor>;
using Fitter = std::function<FittedModel(const Matrix&, const Vector&)>;

struct NamedFitter {
  std::string name;
  Fitter fit;
};

}  // namespace bioml
