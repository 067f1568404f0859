#include <fstream>
#include <ostream>

#include "bioml/error.hpp"
#include "bioml/experiment.hpp"

namespace bioml {

namespace {

const char* const kMetricHeaders[] = {"train R²", "train RMSE", "train MAE", "test R²", "test RMSE", "test MAE"};
const char* const kMetricKeys[] = {"train_r2", "train_rmse", "train_mae", "test_r2", "test_rmse", "test_mae"};

std::vector<std::string> row_cells(const ModelRow& r) {
  return {format_cell(r.train.r2), format_cell(r.train.rmse), format_cell(r.train.mae),
          format_cell(r.test.r2),  format_cell(r.test.rmse),  format_cell(r.test.mae)};
}

// CSV field quoting for metadata values that may hold commas or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string fraction_label(double f) {
  const int train = static_cast<int>(f * 100.0 + 0.5);
  return std::to_string(train) + ":" + std::to_string(100 - train);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  return out;
}

template <typename Writer>
void write_file(const std::filesystem::path& dir, const std::string& name, std::vector<std::string>& written,
                Writer writer) {
  std::ofstream out = open_output(dir / name);
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + (dir / name).string() + "'");
  written.push_back(name);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

void emit_report(std::ostream& out, const ResultsTable& t, ReportFormat format) {
  if (format == ReportFormat::Markdown) {
    out << "# Results: " << t.target << "\n\n";
    out << "| Model |";
    for (const char* h : kMetricHeaders) out << ' ' << h << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < 6; ++i) out << "---:|";
    out << '\n';
    for (const auto& r : t.rows) {
      out << "| " << md_escape(r.model) << " |";
      for (const auto& c : row_cells(r)) out << ' ' << c << " |";
      out << '\n';
    }
    out << "\n## Coefficient of determination (1 - SSE/SST), auxiliary\n\n";
    out << "| Model | train | test |\n|---|---:|---:|\n";
    for (const auto& r : t.rows)
      out << "| " << md_escape(r.model) << " | " << format_cell(r.train_cod) << " | " << format_cell(r.test_cod)
          << " |\n";
    out << "\n## Run metadata\n\n";
    for (const auto& [k, v] : t.metadata) out << "- " << k << ": " << v << '\n';
    return;
  }
  out << "model";
  for (const char* k : kMetricKeys) out << ',' << k;
  out << '\n';
  for (const auto& r : t.rows) {
    out << csv_field(r.model);
    for (const auto& c : row_cells(r)) out << ',' << c;
    out << '\n';
  }
  out << "\n# auxiliary coefficient of determination (1 - SSE/SST)\nmodel,train_cod,test_cod\n";
  for (const auto& r : t.rows)
    out << csv_field(r.model) << ',' << format_cell(r.train_cod) << ',' << format_cell(r.test_cod) << '\n';
  out << "\n# metadata\nkey,value\n";
  for (const auto& [k, v] : t.metadata) out << csv_field(k) << ',' << csv_field(v) << '\n';
}

void emit_split_study(std::ostream& out, const SplitStudyTable& t, ReportFormat format) {
  if (format == ReportFormat::Markdown) {
    out << "# Split study: " << t.target << "\n\n| Model |";
    for (double f : t.fractions) out << " train R² " << fraction_label(f) << " | test R² " << fraction_label(f) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < t.fractions.size(); ++i) out << "---:|---:|";
    out << '\n';
    for (std::size_t m = 0; m < t.models.size(); ++m) {
      out << "| " << md_escape(t.models[m]) << " |";
      for (const auto& [tr, te] : t.cells[m]) out << ' ' << format_cell(tr) << " | " << format_cell(te) << " |";
      out << '\n';
    }
    return;
  }
  out << "model,train_fraction,train_r2,test_r2\n";
  for (std::size_t m = 0; m < t.models.size(); ++m)
    for (std::size_t f = 0; f < t.fractions.size(); ++f)
      out << csv_field(t.models[m]) << ',' << format_value(t.fractions[f]) << ',' << format_cell(t.cells[m][f].first)
          << ',' << format_cell(t.cells[m][f].second) << '\n';
}

void write_scatter_tsv(std::ostream& out, const ScatterSeries& s) {
  out << "actual\tpredicted\n";
  for (Eigen::Index i = 0; i < s.actual.size(); ++i)
    out << format_shortest(s.actual[i]) << '\t' << format_shortest(s.predicted[i]) << '\n';
}

void write_importance_tsv(std::ostream& out, const ImportanceResult& r) {
  out << "feature\timportance\n";
  for (std::size_t j = 0; j < r.features.size(); ++j)
    out << r.features[j] << '\t'
        << (r.failure.empty() ? format_value(r.values[static_cast<Eigen::Index>(j)]) : "FAIL(" + r.failure + ")")
        << '\n';
}

std::vector<std::string> write_run_outputs(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  std::vector<std::string> written;
  const DataTable table = load_experiment_data(spec);
  for (const auto& target : spec.targets) {
    const PreparedTarget p = prepare_target(spec, table, target, spec.split_fractions.front());
    const TargetResults r = run_target(spec, p, table);
    const std::string& t = target.name;
    write_file(out_dir, "results_" + t + ".md", written, [&](std::ostream& o) { emit_report(o, r.table, ReportFormat::Markdown); });
    write_file(out_dir, "results_" + t + ".csv", written, [&](std::ostream& o) { emit_report(o, r.table, ReportFormat::Csv); });
    for (const auto& s : r.scatter)
      write_file(out_dir, "scatter_" + t + "_" + s.model + "_" + s.split + ".tsv", written,
                 [&](std::ostream& o) { write_scatter_tsv(o, s); });
    if (!r.cv.empty())
      write_file(out_dir, "cvbox_" + t + ".tsv", written, [&](std::ostream& o) { write_cv_tsv(o, r.cv); });
    if (r.importance)
      write_file(out_dir, "importance_" + t + ".tsv", written, [&](std::ostream& o) { write_importance_tsv(o, *r.importance); });
    if (r.elimination)
      write_file(out_dir, "selection_" + t + ".tsv", written, [&](std::ostream& o) { write_elimination_tsv(o, *r.elimination); });
    if (spec.split_fractions.size() > 1) {
      const SplitStudyTable s = run_split_study(spec, table, target, spec.split_fractions);
      write_file(out_dir, "split_study_" + t + ".md", written, [&](std::ostream& o) { emit_split_study(o, s, ReportFormat::Markdown); });
      write_file(out_dir, "split_study_" + t + ".csv", written, [&](std::ostream& o) { emit_split_study(o, s, ReportFormat::Csv); });
    }
  }
  if (spec.sweeps.enabled)
    for (const char* which : {"knn", "svr", "rf"})
      for (const auto& f : write_sweep_outputs(spec, which, out_dir)) written.push_back(f);
  return written;
}

std::vector<std::string> write_sweep_outputs(const ExperimentSpec& spec, const std::string& which,
                                             const std::filesystem::path& out_dir) {
  const SweepResult r = run_sweep(spec, which);
  ensure_dir(out_dir);
  std::vector<std::string> written;
  write_file(out_dir, "sweep_" + which + ".tsv", written, [&](std::ostream& o) { write_sweep_tsv(o, r); });
  return written;
}

std::vector<std::string> write_selection_outputs(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
  ExperimentSpec s = spec;
  s.selection.enabled = true;
  const DataTable table = load_experiment_data(s);
  ensure_dir(out_dir);
  std::vector<std::string> written;
  for (const auto& target : s.targets) {
    const PreparedTarget p = prepare_target(s, table, target, s.split_fractions.front());
    write_file(out_dir, "selection_" + target.name + ".tsv", written,
               [&](std::ostream& o) { write_elimination_tsv(o, *p.elimination); });
    write_file(out_dir, "selected_" + target.name + ".txt", written, [&](std::ostream& o) {
      for (const auto& f : p.features) o << f << '\n';
    });
  }
  return written;
}

std::vector<std::string> write_importance_outputs(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
  const DataTable table = load_experiment_data(spec);
  ensure_dir(out_dir);
  std::vector<std::string> written;
  for (const auto& target : spec.targets) {
    const PreparedTarget p = prepare_target(spec, table, target, spec.split_fractions.front());
    const ImportanceResult r = compute_importance(spec, p);
    write_file(out_dir, "importance_" + target.name + ".tsv", written, [&](std::ostream& o) { write_importance_tsv(o, r); });
  }
  return written;
}

}  // namespace bioml
