#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bioml/data.hpp"
#include "bioml/metrics.hpp"
#include "bioml/model_spec.hpp"
#include "bioml/selection.hpp"

namespace bioml {

struct SynthSource {
  std::size_t n = 2000;
  double sigma = 0.1;
  std::uint64_t seed = 42;
};

struct CsvSource {
  std::string path;
};

// `column` is predicted from the 16 schema features plus `extra_inputs`.
struct TargetSpec {
  std::string name;
  std::string column;
  std::vector<std::string> extra_inputs;
};

struct SelectionSpec {
  bool enabled = false;
  std::string model = "KNN";
  std::size_t min_features = 1;
  std::size_t cv_folds = 5;
};

// `enabled` makes the run command emit all three sweeps; the sweep command
// uses the grids regardless.
struct SweepSpec {
  bool enabled = false;
  std::vector<std::size_t> knn_ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::vector<SvrKernel> svr_kernels{SvrKernel::Sigmoid, SvrKernel::Rbf, SvrKernel::Polynomial};
  std::vector<std::size_t> rf_trees{1, 10, 25, 50, 100};
};

struct ExperimentSpec {
  std::variant<SynthSource, CsvSource> data = SynthSource{};
  std::vector<TargetSpec> targets;
  std::vector<std::string> models;
  // Hyperparameters for every known model name, defaults plus overrides.
  std::map<std::string, ModelSpec> model_specs;
  // First entry drives the main run; with more than one entry the split
  // study covers all of them.
  std::vector<double> split_fractions{0.8};
  std::uint64_t seed = 42;
  SelectionSpec selection;
  std::size_t cv_folds = 10;  // 0: no per-model CV distribution
  SweepSpec sweeps;
  bool importance = true;
  std::string importance_model = "RandomForest";
  std::string output_dir = "results";
};

// JSON config; see README for the schema. Throws Config on invalid content.
ExperimentSpec parse_experiment_spec(const std::string& json_text);
// Throws Io naming the path when the file cannot be read.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
// Spec of one configured model, seeded from the master seed and its name.
ModelSpec resolve_model(const ExperimentSpec& spec, const std::string& name);

DataTable load_experiment_data(const ExperimentSpec& spec);

// Split, standardized (statistics from the training rows only) and, when
// enabled, reduced to the backward-elimination selection.
struct PreparedTarget {
  TargetSpec target;
  double train_fraction = 0.8;
  std::vector<std::string> candidate_features;
  std::vector<std::string> features;
  std::optional<EliminationResult> elimination;
  Standardizer standardizer;
  Matrix X_train;
  Vector y_train;
  Matrix X_test;
  Vector y_test;
};

PreparedTarget prepare_target(const ExperimentSpec& spec, const DataTable& table, const TargetSpec& target,
                              double train_fraction);

struct ModelRow {
  std::string model;
  MetricCells train;
  MetricCells test;
  MetricCell train_cod;  // 1 - SSE/SST
  MetricCell test_cod;
  std::string failure;   // full message when the fit failed
};

struct ResultsTable {
  std::string target;
  std::vector<ModelRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

struct ScatterSeries {
  std::string model;
  std::string split;  // train | test
  Vector actual;
  Vector predicted;
};

struct ImportanceResult {
  std::string model;
  std::vector<std::string> features;
  Vector values;
  std::string failure;
};

struct TargetResults {
  ResultsTable table;
  std::vector<ScatterSeries> scatter;
  std::vector<CvEntry> cv;
  std::optional<ImportanceResult> importance;
  std::optional<EliminationResult> elimination;
};

struct SplitStudyTable {
  std::string target;
  std::vector<double> fractions;
  std::vector<std::string> models;
  // cells[model][fraction] = {train R², test R²}
  std::vector<std::vector<std::pair<MetricCell, MetricCell>>> cells;
};

// Fits and scores every configured model on one prepared target. A model
// that fails to fit gets a row of failure markers; the run continues.
TargetResults run_target(const ExperimentSpec& spec, const PreparedTarget& prepared);
// Same, with the loaded table supplied for the report metadata.
TargetResults run_target(const ExperimentSpec& spec, const PreparedTarget& prepared, const DataTable& table);
std::vector<TargetResults> run_experiment(const ExperimentSpec& spec);
SplitStudyTable run_split_study(const ExperimentSpec& spec, const DataTable& table, const TargetSpec& target,
                                const std::vector<double>& fractions);

ImportanceResult compute_importance(const ExperimentSpec& spec, const PreparedTarget& prepared);
// which: knn | svr | rf. Uses every configured target.
SweepResult run_sweep(const ExperimentSpec& spec, const std::string& which);

enum class ReportFormat { Markdown, Csv };

void emit_report(std::ostream& out, const ResultsTable& table, ReportFormat format);
void emit_split_study(std::ostream& out, const SplitStudyTable& table, ReportFormat format);
void write_scatter_tsv(std::ostream& out, const ScatterSeries& series);
void write_importance_tsv(std::ostream& out, const ImportanceResult& result);

// File-producing entry points shared by the command-line tool. Each returns
// the paths it wrote, relative names under `out_dir`.
std::vector<std::string> write_run_outputs(const ExperimentSpec& spec, const std::filesystem::path& out_dir);
std::vector<std::string> write_sweep_outputs(const ExperimentSpec& spec, const std::string& which,
                                             const std::filesystem::path& out_dir);
std::vector<std::string> write_selection_outputs(const ExperimentSpec& spec, const std::filesystem::path& out_dir);
std::vector<std::string> write_importance_outputs(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

}  // namespace bioml
