#pragma once

#include <variant>

#include "bioml/tree.hpp"

namespace bioml {

// Unset: max(1, floor(p / 3)). An integer is a feature count, a double in
// (0, 1] a fraction of p (at least one feature).
using MaxFeatures = std::variant<std::monostate, std::size_t, double>;

std::size_t resolve_max_features(const MaxFeatures& spec, std::size_t p);

struct ForestParams {
  std::size_t n_trees = 100;
  MaxFeatures max_features;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  TreeParams tree;
};

class ForestModel final : public Regressor {
 public:
  ForestModel(std::vector<TreeModel> trees, std::size_t feature_count)
      : trees_(std::move(trees)), p_(feature_count) {}

  std::string_view kind() const override { return "RandomForest"; }
  std::size_t feature_count() const override { return p_; }
  const std::vector<TreeModel>& trees() const { return trees_; }

 protected:
  double predict_row(const double* x) const override;

 private:
  std::vector<TreeModel> trees_;
  std::size_t p_;
};

// Tree t draws its bootstrap sample and per-node feature subsets from
// Rng(derive_seed(seed, t)).
std::shared_ptr<const ForestModel> forest_fit(const Matrix& X, const Vector& y, const ForestParams& params);

struct GbtParams {
  std::size_t n_estimators = 100;
  double learning_rate = 0.1;
  TreeParams tree{3, 2, 1};
  std::uint64_t seed = 0;  // kept for config parity; boosting here is deterministic
};

// F0 = mean(y); F_m = F_{m-1} + learning_rate * h_m with h_m fitted to the
// residuals y - F_{m-1}(X).
class GbtModel final : public Regressor {
 public:
  GbtModel(double init, double learning_rate, std::vector<TreeModel> trees, std::size_t feature_count)
      : init_(init), lr_(learning_rate), trees_(std::move(trees)), p_(feature_count) {}

  std::string_view kind() const override { return "GradientBoosting"; }
  std::size_t feature_count() const override { return p_; }
  double initial_value() const { return init_; }
  double learning_rate() const { return lr_; }
  const std::vector<TreeModel>& trees() const { return trees_; }
  // Column m holds F_m(X) for m = 0..n_estimators.
  Eigen::MatrixXd staged_predict(const Matrix& X) const;

 protected:
  double predict_row(const double* x) const override;

 private:
  double init_;
  double lr_;
  std::vector<TreeModel> trees_;
  std::size_t p_;
};

// Throws Config when n_estimators = 0 or learning_rate is outside [0, 1].
std::shared_ptr<const GbtModel> gbt_fit(const Matrix& X, const Vector& y, const GbtParams& params);

// Summed impurity decrease per feature, averaged over the model's trees and
// normalized to sum to 1. A model whose trees never split gets all zeros.
// Throws Unsupported for models without trees.
Vector feature_importance(const Regressor& model);

}  // namespace bioml
