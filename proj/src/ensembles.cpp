#include "bioml/ensembles.hpp"

#include "bioml/data.hpp"
#include "bioml/error.hpp"

namespace bioml {

namespace {

FittedModel fit_member(const NamedFitter& f, const Matrix& X, const Vector& y) {
  try {
    return f.fit(X, y);
  } catch (const Error& e) {
    throw Error(e.code(), "member '" + f.name + "': " + e.detail());
  }
}

}  // namespace

VotingModel::VotingModel(std::vector<std::string> names, std::vector<FittedModel> members)
    : names_(std::move(names)), members_(std::move(members)), p_(members_.front()->feature_count()) {}

double VotingModel::predict_row(const double* x) const {
  const Vector row = Eigen::Map<const Vector>(x, static_cast<Eigen::Index>(p_));
  double s = 0.0;
  for (const auto& m : members_) s += m->predict(row);
  return s / static_cast<double>(members_.size());
}

Vector VotingModel::predict_rows(const Matrix& X) const {
  Vector s = Vector::Zero(X.rows());
  for (const auto& m : members_) s += m->predict(X);
  return s / static_cast<double>(members_.size());
}

std::shared_ptr<const VotingModel> voting_fit(const std::vector<NamedFitter>& members, const Matrix& X,
                                              const Vector& y) {
  if (members.size() < 2) throw Error(ErrorCode::Config, "voting needs at least two members");
  std::vector<std::string> names;
  std::vector<FittedModel> fitted;
  for (const auto& m : members) {
    names.push_back(m.name);
    fitted.push_back(fit_member(m, X, y));
  }
  return std::make_shared<VotingModel>(std::move(names), std::move(fitted));
}

StackingModel::StackingModel(std::vector<std::string> base_names, std::vector<FittedModel> bases,
                             FittedModel final_model, Matrix meta_features,
                             std::vector<std::vector<std::size_t>> folds)
    : names_(std::move(base_names)),
      bases_(std::move(bases)),
      final_(std::move(final_model)),
      meta_(std::move(meta_features)),
      folds_(std::move(folds)),
      p_(bases_.front()->feature_count()) {}

double StackingModel::predict_row(const double* x) const {
  const Vector row = Eigen::Map<const Vector>(x, static_cast<Eigen::Index>(p_));
  Vector z(static_cast<Eigen::Index>(bases_.size()));
  for (std::size_t b = 0; b < bases_.size(); ++b) z[static_cast<Eigen::Index>(b)] = bases_[b]->predict(row);
  return final_->predict(z);
}

Vector StackingModel::predict_rows(const Matrix& X) const {
  Matrix Z(X.rows(), static_cast<Eigen::Index>(bases_.size()));
  for (std::size_t b = 0; b < bases_.size(); ++b) Z.col(static_cast<Eigen::Index>(b)) = bases_[b]->predict(X);
  return final_->predict(Z);
}

std::shared_ptr<const StackingModel> stacking_fit(const std::vector<NamedFitter>& bases, const NamedFitter& final_model,
                                                  const Matrix& X, const Vector& y, const StackingOptions& options) {
  if (bases.empty()) throw Error(ErrorCode::Config, "stacking needs at least one base model");
  if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X and y row counts differ");
  const std::size_t n = static_cast<std::size_t>(X.rows());
  auto folds = make_folds(n, options.oof_folds, options.seed);
  Matrix meta(X.rows(), static_cast<Eigen::Index>(bases.size()));
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train_rows = fold_complement(folds, f);
    const Matrix X_train = take_rows(X, train_rows);
    const Vector y_train = take_rows(y, train_rows);
    const Matrix X_held = take_rows(X, folds[f]);
    for (std::size_t b = 0; b < bases.size(); ++b) {
      const Vector pred = fit_member(bases[b], X_train, y_train)->predict(X_held);
      for (std::size_t i = 0; i < folds[f].size(); ++i)
        meta(static_cast<Eigen::Index>(folds[f][i]), static_cast<Eigen::Index>(b)) = pred[static_cast<Eigen::Index>(i)];
    }
  }
  std::vector<std::string> names;
  std::vector<FittedModel> fitted;
  for (const auto& b : bases) {
    names.push_back(b.name);
    fitted.push_back(fit_member(b, X, y));
  }
  FittedModel top = fit_member(final_model, meta, y);
  return std::make_shared<StackingModel>(std::move(names), std::move(fitted), std::move(top), std::move(meta),
                                         std::move(folds));
}

}  // namespace bioml
