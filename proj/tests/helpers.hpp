#pragma once

#include <optional>
#include <sstream>
#include <string>

#include "bioml/error.hpp"
#include "bioml/rng.hpp"
#include "bioml/types.hpp"

namespace testing {

inline bioml::Matrix random_matrix(bioml::Rng& rng, Eigen::Index n, Eigen::Index p, double lo = -1, double hi = 1) {
  bioml::Matrix X(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = rng.uniform(lo, hi);
  return X;
}

inline bioml::Vector random_vector(bioml::Rng& rng, Eigen::Index n, double lo = -1, double hi = 1) {
  bioml::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// Code of the bioml::Error thrown by f, or nullopt.
template <typename F>
std::optional<bioml::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const bioml::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing
