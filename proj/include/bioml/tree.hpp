#pragma once

#include <optional>
#include <vector>

#include "bioml/model.hpp"
#include "bioml/rng.hpp"

namespace bioml {

struct TreeParams {
  std::optional<std::size_t> max_depth;  // unset: grow until pure or too small
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
};

// Internal when feature >= 0: x[feature] <= threshold goes left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean target of the samples reaching the node
  std::size_t sample_count = 0;
  // Parent SSR minus the children's SSR; 0 for leaves.
  double impurity_decrease = 0.0;

  bool is_leaf() const { return feature < 0; }
};

class TreeModel final : public Regressor {
 public:
  TreeModel(std::vector<TreeNode> nodes, std::size_t feature_count)
      : nodes_(std::move(nodes)), p_(feature_count) {}

  std::string_view kind() const override { return "DecisionTree"; }
  std::size_t feature_count() const override { return p_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;
  // Unchecked prediction for a row of feature_count() values.
  double evaluate(const double* x) const;

 protected:
  double predict_row(const double* x) const override;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t p_;
};

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double ssr = 0.0;  // SSR of the two children
};

// Relative tolerance of the split comparison: a later candidate replaces the
// current best only if its SSR is lower by more than this times the node SSR.
inline constexpr double kSplitTieTolerance = 1e-12;

// Best split of `rows` over `features` (scanned in the given order, each
// feature's thresholds ascending). Candidate thresholds are midpoints of
// consecutive distinct values with at least min_samples_leaf rows per side.
SplitChoice best_split(const Matrix& X, const Vector& y, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& features, std::size_t min_samples_leaf);

void validate_tree_params(const TreeParams& params);

// Row indices 0..n-1 sorted per feature by (value, row).
using SortedColumns = std::vector<std::vector<std::size_t>>;
SortedColumns presort_columns(const Matrix& X);

// Greedy CART on the given (possibly repeated) rows. With `rng` set, every
// node scans a fresh random subset of `max_features` features; if none of
// them admits a split, the remaining features are tried in random order.
// `presorted`, when given, must be presort_columns(X); it saves the per-tree sort.
TreeModel grow_tree(const Matrix& X, const Vector& y, const std::vector<std::size_t>& rows, const TreeParams& params,
                    std::size_t max_features, Rng* rng, const SortedColumns* presorted = nullptr);

std::shared_ptr<const TreeModel> tree_fit(const Matrix& X, const Vector& y, const TreeParams& params);
double tree_predict(const TreeModel& model, const Vector& x);

}  // namespace bioml
