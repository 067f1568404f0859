#include "bioml/error.hpp"
#include "bioml/forest.hpp"

namespace bioml {

namespace {

void accumulate(const TreeModel& tree, Vector& total) {
  for (const auto& node : tree.nodes())
    if (!node.is_leaf()) total[node.feature] += node.impurity_decrease;
}

}  // namespace

Vector feature_importance(const Regressor& model) {
  const std::size_t p = model.feature_count();
  Vector total = Vector::Zero(static_cast<Eigen::Index>(p));
  std::size_t tree_count = 0;
  if (const auto* forest = dynamic_cast<const ForestModel*>(&model)) {
    for (const auto& t : forest->trees()) accumulate(t, total);
    tree_count = forest->trees().size();
  } else if (const auto* gbt = dynamic_cast<const GbtModel*>(&model)) {
    for (const auto& t : gbt->trees()) accumulate(t, total);
    tree_count = gbt->trees().size();
  } else if (const auto* tree = dynamic_cast<const TreeModel*>(&model)) {
    accumulate(*tree, total);
    tree_count = 1;
  } else {
    throw Error(ErrorCode::Unsupported, "feature importance needs a tree-based model, got " +
                                            std::string(model.kind()));
  }
  if (tree_count > 0) total /= static_cast<double>(tree_count);
  const double sum = total.sum();
  if (sum > 0.0) total /= sum;
  return total;
}

}  // namespace bioml
