#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bioml/data.hpp"
#include "bioml/metrics.hpp"
#include "bioml/model_spec.hpp"

namespace bioml {

struct CvResult {
  std::size_t k = 0;
  std::vector<std::size_t> fold_sizes;
  std::vector<double> neg_mae;               // per fold
  std::vector<std::optional<double>> r2;     // per fold; empty when R² is undefined
  double mean = 0.0;                         // of neg_mae
  double stddev = 0.0;                       // of neg_mae, divisor k - 1
};

// Folds from make_folds(n, k, seed); each fold is scored by a model fitted on
// the other k - 1. Throws InvalidFolds unless 2 <= k <= n; fit errors propagate.
CvResult k_fold_cv(const Fitter& fit, const Matrix& X, const Vector& y, std::size_t k, std::uint64_t seed);
CvResult k_fold_cv(const ModelSpec& spec, const Matrix& X, const Vector& y, std::size_t k, std::uint64_t seed);

struct EliminationOptions {
  std::size_t min_features = 1;
  std::size_t cv_folds = 5;
  std::uint64_t seed = 0;  // the same folds score every candidate
};

struct EliminationStep {
  std::string removed;
  double score = 0.0;  // mean CV negative MAE after the removal
};

struct EliminationResult {
  std::vector<std::string> selected;  // in input order
  double initial_score = 0.0;
  std::vector<EliminationStep> trace;
  std::string stop_reason;
};

// Repeatedly drops the feature whose removal gives the highest mean CV
// negative MAE, as long as that score is strictly higher than the current
// one and more than min_features remain. Ties between candidates go to the
// earlier feature.
EliminationResult backward_eliminate(const ModelSpec& spec, const DataTable& table, const std::string& target,
                                     const std::vector<std::string>& features, const EliminationOptions& options);

// One prediction task per target; targets may use different inputs.
struct SweepTask {
  std::string target;
  Matrix X_train;
  Vector y_train;
  Matrix X_test;
  Vector y_test;
};

using SweepData = std::vector<SweepTask>;

struct SweepPoint {
  std::string value;
  std::string target;
  MetricCells train;
  MetricCells test;
};

struct SweepResult {
  std::string name;
  std::string axis;
  std::vector<SweepPoint> points;  // axis-major, then target order
};

SweepResult sweep_knn_k(const SweepData& data, const std::vector<std::size_t>& ks, const KnnParams& base);
SweepResult sweep_svr_kernel(const SweepData& data, const std::vector<SvrKernel>& kernels, const SvrParams& base);
SweepResult sweep_rf_trees(const SweepData& data, const std::vector<std::size_t>& counts, const ForestParams& base);

std::string kernel_label(SvrKernel kernel);

// Header: <axis> target train_r2 train_rmse train_mae test_r2 test_rmse test_mae
void write_sweep_tsv(std::ostream& out, const SweepResult& result);
struct CvEntry {
  std::string model;
  std::optional<CvResult> result;
  std::string failure;  // error code name when result is empty
};

// Header: model fold neg_mae r2. A failed model gets one row with fold "-".
void write_cv_tsv(std::ostream& out, const std::vector<CvEntry>& entries);
void write_elimination_tsv(std::ostream& out, const EliminationResult& result);

}  // namespace bioml
