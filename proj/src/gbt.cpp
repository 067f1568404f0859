#include "bioml/forest.hpp"

#include <numeric>

#include "bioml/error.hpp"

namespace bioml {

double GbtModel::predict_row(const double* x) const {
  double f = init_;
  for (const auto& t : trees_) f += lr_ * t.evaluate(x);
  return f;
}

Eigen::MatrixXd GbtModel::staged_predict(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != p_) throw Error(ErrorCode::LengthMismatch, "feature count mismatch");
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(trees_.size() + 1));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double f = init_;
    out(i, 0) = f;
    for (std::size_t m = 0; m < trees_.size(); ++m) {
      f += lr_ * trees_[m].evaluate(X.row(i).data());
      out(i, static_cast<Eigen::Index>(m + 1)) = f;
    }
  }
  return out;
}

std::shared_ptr<const GbtModel> gbt_fit(const Matrix& X, const Vector& y, const GbtParams& params) {
  if (params.n_estimators < 1) throw Error(ErrorCode::Config, "n_estimators must be >= 1");
  if (!(params.learning_rate >= 0.0 && params.learning_rate <= 1.0))
    throw Error(ErrorCode::Config, "learning_rate must be in [0, 1]");
  validate_tree_params(params.tree);
  if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X and y row counts differ");
  if (X.rows() == 0) throw Error(ErrorCode::EmptyInput, "cannot fit on zero rows");
  const std::size_t n = static_cast<std::size_t>(X.rows());
  const std::size_t p = static_cast<std::size_t>(X.cols());
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const SortedColumns presorted = presort_columns(X);
  const double init = y.mean();
  Vector F = Vector::Constant(X.rows(), init);
  std::vector<TreeModel> trees;
  trees.reserve(params.n_estimators);
  for (std::size_t m = 0; m < params.n_estimators; ++m) {
    const Vector residual = y - F;
    trees.push_back(grow_tree(X, residual, rows, params.tree, p, nullptr, &presorted));
    const TreeModel& h = trees.back();
    for (Eigen::Index i = 0; i < X.rows(); ++i) F[i] += params.learning_rate * h.evaluate(X.row(i).data());
  }
  return std::make_shared<GbtModel>(init, params.learning_rate, std::move(trees), p);
}

}  // namespace bioml
