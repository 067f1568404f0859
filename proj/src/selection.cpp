#include "bioml/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bioml/error.hpp"

namespace bioml {

CvResult k_fold_cv(const Fitter& fit, const Matrix& X, const Vector& y, std::size_t k, std::uint64_t seed) {
  if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X and y row counts differ");
  const auto folds = make_folds(static_cast<std::size_t>(X.rows()), k, seed);
  CvResult out;
  out.k = k;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train = fold_complement(folds, f);
    const FittedModel model = fit(take_rows(X, train), take_rows(y, train));
    const Vector pred = model->predict(take_rows(X, folds[f]));
    const Vector actual = take_rows(y, folds[f]);
    out.fold_sizes.push_back(folds[f].size());
    out.neg_mae.push_back(negative_mae(pred, actual));
    try {
      out.r2.emplace_back(r_squared(pred, actual));
    } catch (const Error&) {
      out.r2.emplace_back(std::nullopt);
    }
  }
  double sum = 0.0;
  for (double s : out.neg_mae) sum += s;
  out.mean = sum / static_cast<double>(k);
  double ss = 0.0;
  for (double s : out.neg_mae) ss += (s - out.mean) * (s - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(k - 1));
  return out;
}

CvResult k_fold_cv(const ModelSpec& spec, const Matrix& X, const Vector& y, std::size_t k, std::uint64_t seed) {
  return k_fold_cv(make_fitter(spec).fit, X, y, k, seed);
}

EliminationResult backward_eliminate(const ModelSpec& spec, const DataTable& table, const std::string& target,
                                     const std::vector<std::string>& features, const EliminationOptions& options) {
  if (options.min_features < 1) throw Error(ErrorCode::Config, "min_features must be >= 1");
  if (features.empty()) throw Error(ErrorCode::Config, "no candidate features");
  const Vector y = table.column(target);
  const Fitter fit = make_fitter(spec).fit;
  auto score = [&](const std::vector<std::string>& cols) {
    return k_fold_cv(fit, table.columns(cols), y, options.cv_folds, options.seed).mean;
  };
  EliminationResult out;
  out.selected = features;
  out.initial_score = score(out.selected);
  double current = out.initial_score;
  for (;;) {
    if (out.selected.size() <= options.min_features) {
      out.stop_reason = "min_features reached";
      break;
    }
    std::size_t best_index = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < out.selected.size(); ++j) {
      std::vector<std::string> cols = out.selected;
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(j));
      const double s = score(cols);
      if (s > best) {
        best = s;
        best_index = j;
      }
    }
    if (!(best > current)) {
      out.stop_reason = "no removal improves the score";
      break;
    }
    out.trace.push_back({out.selected[best_index], best});
    out.selected.erase(out.selected.begin() + static_cast<std::ptrdiff_t>(best_index));
    current = best;
  }
  return out;
}

namespace {

template <typename Params, typename Configure>
SweepResult run_sweep(const std::string& name, const std::string& axis, const SweepData& data,
                      const std::vector<std::string>& values, Configure configure) {
  SweepResult out{name, axis, {}};
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (const auto& task : data) {
      SweepPoint point{values[v], task.target, {}, {}};
      try {
        const FittedModel model = configure(v, task.X_train, task.y_train);
        point.train = score_cells(model->predict(task.X_train), task.y_train);
        point.test = score_cells(model->predict(task.X_test), task.y_test);
      } catch (const Error& e) {
        point.train = point.test = failed_cells(std::string(to_string(e.code())));
      }
      out.points.push_back(std::move(point));
    }
  }
  return out;
}

template <typename T>
void require_unique(const std::vector<T>& values, const std::string& what) {
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] == values[j]) throw Error(ErrorCode::Config, "duplicate " + what + " in sweep");
}

}  // namespace

std::string kernel_label(SvrKernel kernel) {
  switch (kernel) {
    case SvrKernel::Rbf: return "rbf";
    case SvrKernel::Polynomial: return "polynomial";
    case SvrKernel::Sigmoid: return "sigmoid";
  }
  return "rbf";
}

SweepResult sweep_knn_k(const SweepData& data, const std::vector<std::size_t>& ks, const KnnParams& base) {
  std::vector<std::size_t> sorted = ks;
  std::sort(sorted.begin(), sorted.end());
  require_unique(sorted, "k");
  std::vector<std::string> labels;
  for (auto k : sorted) labels.push_back(std::to_string(k));
  return run_sweep<KnnParams>("knn", "k", data, labels, [&](std::size_t v, const Matrix& X, const Vector& y) {
    KnnParams p = base;
    p.k = sorted[v];
    return FittedModel(knn_fit(X, y, p));
  });
}

SweepResult sweep_svr_kernel(const SweepData& data, const std::vector<SvrKernel>& kernels, const SvrParams& base) {
  require_unique(kernels, "kernel");
  std::vector<std::string> labels;
  for (auto k : kernels) labels.push_back(kernel_label(k));
  return run_sweep<SvrParams>("svr", "kernel", data, labels, [&](std::size_t v, const Matrix& X, const Vector& y) {
    SvrParams p = base;
    p.kernel = kernels[v];
    return FittedModel(svr_fit(X, y, p));
  });
}

SweepResult sweep_rf_trees(const SweepData& data, const std::vector<std::size_t>& counts, const ForestParams& base) {
  std::vector<std::size_t> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  require_unique(sorted, "tree count");
  std::vector<std::string> labels;
  for (auto c : sorted) labels.push_back(std::to_string(c));
  return run_sweep<ForestParams>("rf", "n_trees", data, labels, [&](std::size_t v, const Matrix& X, const Vector& y) {
    ForestParams p = base;
    p.n_trees = sorted[v];
    return FittedModel(forest_fit(X, y, p));
  });
}

void write_sweep_tsv(std::ostream& out, const SweepResult& result) {
  out << result.axis << "\ttarget\ttrain_r2\ttrain_rmse\ttrain_mae\ttest_r2\ttest_rmse\ttest_mae\n";
  for (const auto& p : result.points) {
    out << p.value << '\t' << p.target << '\t' << format_cell(p.train.r2) << '\t' << format_cell(p.train.rmse) << '\t'
        << format_cell(p.train.mae) << '\t' << format_cell(p.test.r2) << '\t' << format_cell(p.test.rmse) << '\t'
        << format_cell(p.test.mae) << '\n';
  }
}

void write_cv_tsv(std::ostream& out, const std::vector<CvEntry>& entries) {
  out << "model\tfold\tneg_mae\tr2\n";
  for (const auto& e : entries) {
    if (!e.result) {
      out << e.model << "\t-\tFAIL(" << e.failure << ")\tFAIL(" << e.failure << ")\n";
      continue;
    }
    for (std::size_t f = 0; f < e.result->neg_mae.size(); ++f) {
      out << e.model << '\t' << f + 1 << '\t' << format_value(e.result->neg_mae[f]) << '\t'
          << (e.result->r2[f] ? format_value(*e.result->r2[f]) : std::string("FAIL(ConstantVector)")) << '\n';
    }
  }
}

void write_elimination_tsv(std::ostream& out, const EliminationResult& result) {
  out << "step\tremoved\tcv_neg_mae\n";
  out << "0\t-\t" << format_value(result.initial_score) << '\n';
  for (std::size_t i = 0; i < result.trace.size(); ++i)
    out << i + 1 << '\t' << result.trace[i].removed << '\t' << format_value(result.trace[i].score) << '\n';
}

}  // namespace bioml
