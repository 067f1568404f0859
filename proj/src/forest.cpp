#include "bioml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bioml/error.hpp"

namespace bioml {

std::size_t resolve_max_features(const MaxFeatures& spec, std::size_t p) {
  if (std::holds_alternative<std::size_t>(spec)) {
    const std::size_t m = std::get<std::size_t>(spec);
    if (m < 1 || m > p)
      throw Error(ErrorCode::Config, "max_features " + std::to_string(m) + " outside [1, " + std::to_string(p) + "]");
    return m;
  }
  if (std::holds_alternative<double>(spec)) {
    const double f = std::get<double>(spec);
    if (!(f > 0.0 && f <= 1.0)) throw Error(ErrorCode::Config, "max_features fraction must be in (0, 1]");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(f * static_cast<double>(p))));
  }
  return std::max<std::size_t>(1, p / 3);
}

double ForestModel::predict_row(const double* x) const {
  double s = 0.0;
  for (const auto& t : trees_) s += t.evaluate(x);
  return s / static_cast<double>(trees_.size());
}

std::shared_ptr<const ForestModel> forest_fit(const Matrix& X, const Vector& y, const ForestParams& params) {
  if (params.n_trees < 1) throw Error(ErrorCode::Config, "n_trees must be >= 1");
  validate_tree_params(params.tree);
  if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X and y row counts differ");
  if (X.rows() == 0) throw Error(ErrorCode::EmptyInput, "cannot fit a forest on zero rows");
  const std::size_t n = static_cast<std::size_t>(X.rows());
  const std::size_t p = static_cast<std::size_t>(X.cols());
  const std::size_t mtry = resolve_max_features(params.max_features, p);
  std::vector<TreeModel> trees;
  trees.reserve(params.n_trees);
  std::vector<std::size_t> rows(n);
  const SortedColumns presorted = presort_columns(X);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng rng(derive_seed(params.seed, t));
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    trees.push_back(grow_tree(X, y, rows, params.tree, mtry, &rng, &presorted));
  }
  return std::make_shared<ForestModel>(std::move(trees), p);
}

}  // namespace bioml
