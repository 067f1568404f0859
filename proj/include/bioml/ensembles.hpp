#pragma once

#include <vector>

#include "bioml/model.hpp"

namespace bioml {

// Unweighted mean of the members' predictions, summed in member order.
class VotingModel final : public Regressor {
 public:
  VotingModel(std::vector<std::string> names, std::vector<FittedModel> members);

  std::string_view kind() const override { return "Voting"; }
  std::size_t feature_count() const override { return p_; }
  const std::vector<std::string>& member_names() const { return names_; }
  const std::vector<FittedModel>& members() const { return members_; }

 protected:
  double predict_row(const double* x) const override;
  Vector predict_rows(const Matrix& X) const override;

 private:
  std::vector<std::string> names_;
  std::vector<FittedModel> members_;
  std::size_t p_;
};

// Fits every member on (X, y). Throws Config for fewer than two members; a
// member's failure is rethrown with its name prepended and its code kept.
std::shared_ptr<const VotingModel> voting_fit(const std::vector<NamedFitter>& members, const Matrix& X,
                                              const Vector& y);

struct StackingOptions {
  std::size_t oof_folds = 5;
  std::uint64_t seed = 0;  // fold shuffle
};

// Final model applied to the base models' predictions. Bases are refit on
// all rows; the final model was trained on out-of-fold predictions.
class StackingModel final : public Regressor {
 public:
  StackingModel(std::vector<std::string> base_names, std::vector<FittedModel> bases, FittedModel final_model,
                Matrix meta_features, std::vector<std::vector<std::size_t>> folds);

  std::string_view kind() const override { return "Stacking"; }
  std::size_t feature_count() const override { return p_; }
  const std::vector<std::string>& base_names() const { return names_; }
  const std::vector<FittedModel>& bases() const { return bases_; }
  const FittedModel& final_model() const { return final_; }
  // n x |bases| out-of-fold predictions the final model was fitted on.
  const Matrix& meta_features() const { return meta_; }
  const std::vector<std::vector<std::size_t>>& folds() const { return folds_; }

 protected:
  double predict_row(const double* x) const override;
  Vector predict_rows(const Matrix& X) const override;

 private:
  std::vector<std::string> names_;
  std::vector<FittedModel> bases_;
  FittedModel final_;
  Matrix meta_;
  std::vector<std::vector<std::size_t>> folds_;
  std::size_t p_;
};

// Throws Config with no bases, InvalidFolds unless 2 <= oof_folds <= n.
std::shared_ptr<const StackingModel> stacking_fit(const std::vector<NamedFitter>& bases, const NamedFitter& final_model,
                                                  const Matrix& X, const Vector& y, const StackingOptions& options);

}  // namespace bioml
