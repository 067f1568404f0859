#include "bioml/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "bioml/error.hpp"
#include "bioml/synth.hpp"
#include "spec_json.hpp"

namespace bioml {

using nlohmann::json;

namespace {

// Seed streams derived from the master seed.
constexpr std::uint64_t kSplitStream = 101;
constexpr std::uint64_t kCvStream = 202;
constexpr std::uint64_t kSelectionStream = 303;

std::uint64_t name_stream(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.contains(it.key())) throw Error(ErrorCode::Config, "unknown key '" + it.key() + "' in " + where);
}

const json& require_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw Error(ErrorCode::Config, "'" + where + "' must be a JSON object");
  return v;
}

std::size_t get_size(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw Error(ErrorCode::Config, "'" + where + "' must be a non-negative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::uint64_t get_seed(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    throw Error(ErrorCode::Config, "'" + where + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<std::size_t> get_size_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorCode::Config, "'" + where + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& e : v) out.push_back(get_size(e, where));
  return out;
}

TargetSpec parse_target(const json& v, const FeatureSchema& schema) {
  TargetSpec t;
  if (v.is_string()) {
    t.name = t.column = v.get<std::string>();
    if (t.column == "RRR") t.extra_inputs = {"SEF", "SCI", "OMF"};
  } else if (v.is_object()) {
    check_keys(v, {"name", "column", "extra_inputs"}, "target");
    t.column = json_get<std::string>(v.value("column", json()), "target.column");
    t.name = v.contains("name") ? json_get<std::string>(v["name"], "target.name") : t.column;
    if (v.contains("extra_inputs")) t.extra_inputs = json_get<std::vector<std::string>>(v["extra_inputs"], "extra_inputs");
  } else {
    throw Error(ErrorCode::Config, "target entries must be strings or objects");
  }
  if (!schema.contains(t.column)) throw Error(ErrorCode::Config, "unknown target column '" + t.column + "'");
  if (!schema.is_target(t.column)) throw Error(ErrorCode::Config, "'" + t.column + "' is a feature, not a target");
  for (const auto& e : t.extra_inputs) {
    if (!schema.contains(e)) throw Error(ErrorCode::Config, "unknown input column '" + e + "'");
    if (e == t.column) throw Error(ErrorCode::Config, "target '" + t.column + "' cannot be its own input");
    if (!schema.is_target(e)) throw Error(ErrorCode::Config, "'" + e + "' is already a feature");
  }
  if (t.name.empty() || t.name.find_first_of("/\\ \t") != std::string::npos)
    throw Error(ErrorCode::Config, "target name '" + t.name + "' is not usable in file names");
  return t;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed config JSON: ") + e.what());
  }
  require_object(root, "config");
  check_keys(root,
             {"data", "targets", "models", "split_fractions", "seed", "hyperparameters", "feature_selection",
              "cv_folds", "sweeps", "importance", "output_dir"},
             "config");
  ExperimentSpec spec;
  const FeatureSchema schema = FeatureSchema::biomass();

  if (root.contains("seed")) spec.seed = get_seed(root["seed"], "seed");

  SynthSource synth;
  synth.seed = spec.seed;
  spec.data = synth;
  if (root.contains("data")) {
    const json& d = require_object(root["data"], "data");
    check_keys(d, {"synthetic", "csv"}, "data");
    if (d.contains("synthetic") == d.contains("csv"))
      throw Error(ErrorCode::Config, "'data' needs exactly one of 'synthetic' or 'csv'");
    if (d.contains("csv")) {
      spec.data = CsvSource{json_get<std::string>(d["csv"], "data.csv")};
    } else {
      const json& s = require_object(d["synthetic"], "data.synthetic");
      check_keys(s, {"n", "sigma", "seed"}, "data.synthetic");
      if (s.contains("n")) synth.n = get_size(s["n"], "data.synthetic.n");
      if (s.contains("sigma")) synth.sigma = json_get<double>(s["sigma"], "data.synthetic.sigma");
      if (s.contains("seed")) synth.seed = get_seed(s["seed"], "data.synthetic.seed");
      spec.data = synth;
    }
  }

  if (!root.contains("targets") || !root["targets"].is_array() || root["targets"].empty())
    throw Error(ErrorCode::Config, "'targets' must be a non-empty array");
  std::set<std::string> target_names;
  for (const auto& t : root["targets"]) {
    spec.targets.push_back(parse_target(t, schema));
    if (!target_names.insert(spec.targets.back().name).second)
      throw Error(ErrorCode::Config, "duplicate target '" + spec.targets.back().name + "'");
  }

  const json models = root.value("models", json(independent_model_names()));
  if (!models.is_array() || models.empty()) throw Error(ErrorCode::Config, "'models' must be a non-empty array");
  std::set<std::string> seen;
  for (const auto& m : models) {
    const auto name = json_get<std::string>(m, "models");
    if (!is_known_model(name)) throw Error(ErrorCode::Config, "unknown model '" + name + "'");
    if (!seen.insert(name).second) throw Error(ErrorCode::Config, "duplicate model '" + name + "'");
    spec.models.push_back(name);
  }

  json hyper = root.value("hyperparameters", json::object());
  require_object(hyper, "hyperparameters");
  for (auto it = hyper.begin(); it != hyper.end(); ++it)
    if (!is_known_model(it.key())) throw Error(ErrorCode::Config, "hyperparameters for unknown model '" + it.key() + "'");
  for (const auto& name : independent_model_names())
    spec.model_specs[name] = apply_overrides(default_model_spec(name), hyper.value(name, json()));
  std::map<std::string, ModelSpec> independents = spec.model_specs;
  for (const auto& name : preset_model_names())
    spec.model_specs[name] = apply_overrides(preset_model_spec(name, independents), hyper.value(name, json()));

  if (root.contains("split_fractions")) {
    const json& f = root["split_fractions"];
    if (!f.is_array() || f.empty()) throw Error(ErrorCode::Config, "'split_fractions' must be a non-empty array");
    spec.split_fractions.clear();
    for (const auto& v : f) {
      const double x = json_get<double>(v, "split_fractions");
      if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::Config, "split fractions must lie in (0, 1)");
      spec.split_fractions.push_back(x);
    }
  }

  if (root.contains("feature_selection")) {
    const json& s = require_object(root["feature_selection"], "feature_selection");
    check_keys(s, {"enabled", "model", "min_features", "cv_folds"}, "feature_selection");
    if (s.contains("enabled")) spec.selection.enabled = json_get<bool>(s["enabled"], "feature_selection.enabled");
    if (s.contains("model")) spec.selection.model = json_get<std::string>(s["model"], "feature_selection.model");
    if (s.contains("min_features")) spec.selection.min_features = get_size(s["min_features"], "feature_selection.min_features");
    if (s.contains("cv_folds")) spec.selection.cv_folds = get_size(s["cv_folds"], "feature_selection.cv_folds");
    if (!is_known_model(spec.selection.model))
      throw Error(ErrorCode::Config, "unknown selection model '" + spec.selection.model + "'");
    if (spec.selection.min_features < 1) throw Error(ErrorCode::Config, "min_features must be >= 1");
    if (spec.selection.cv_folds < 2) throw Error(ErrorCode::InvalidFolds, "feature_selection.cv_folds must be >= 2");
  }

  if (root.contains("cv_folds")) {
    spec.cv_folds = get_size(root["cv_folds"], "cv_folds");
    if (spec.cv_folds == 1) throw Error(ErrorCode::InvalidFolds, "cv_folds must be 0 (off) or >= 2");
  }

  if (root.contains("sweeps")) {
    const json& s = require_object(root["sweeps"], "sweeps");
    check_keys(s, {"enabled", "knn_k", "svr_kernels", "rf_trees"}, "sweeps");
    if (s.contains("enabled")) spec.sweeps.enabled = json_get<bool>(s["enabled"], "sweeps.enabled");
    if (s.contains("knn_k")) spec.sweeps.knn_ks = get_size_list(s["knn_k"], "sweeps.knn_k");
    if (s.contains("rf_trees")) spec.sweeps.rf_trees = get_size_list(s["rf_trees"], "sweeps.rf_trees");
    if (s.contains("svr_kernels")) {
      spec.sweeps.svr_kernels.clear();
      for (const auto& k : json_get<std::vector<std::string>>(s["svr_kernels"], "sweeps.svr_kernels")) {
        SvrParams p;
        p = std::get<SvrParams>(apply_overrides(ModelSpec{"SVR", p}, json{{"kernel", k}}).params);
        spec.sweeps.svr_kernels.push_back(p.kernel);
      }
    }
  }

  if (root.contains("importance")) {
    const json& s = require_object(root["importance"], "importance");
    check_keys(s, {"enabled", "model"}, "importance");
    if (s.contains("enabled")) spec.importance = json_get<bool>(s["enabled"], "importance.enabled");
    if (s.contains("model")) spec.importance_model = json_get<std::string>(s["model"], "importance.model");
    if (!is_known_model(spec.importance_model))
      throw Error(ErrorCode::Config, "unknown importance model '" + spec.importance_model + "'");
  }

  if (root.contains("output_dir")) spec.output_dir = json_get<std::string>(root["output_dir"], "output_dir");
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_spec(text.str());
}

ModelSpec resolve_model(const ExperimentSpec& spec, const std::string& name) {
  auto it = spec.model_specs.find(name);
  ModelSpec base;
  if (it != spec.model_specs.end()) {
    base = it->second;
  } else if (is_known_model(name)) {
    const auto& ind = independent_model_names();
    base = std::find(ind.begin(), ind.end(), name) != ind.end() ? default_model_spec(name)
                                                                : preset_model_spec(name, spec.model_specs);
  } else {
    throw Error(ErrorCode::Config, "unknown model '" + name + "'");
  }
  return with_seed(std::move(base), derive_seed(spec.seed, name_stream(name)));
}

DataTable load_experiment_data(const ExperimentSpec& spec) {
  if (const auto* s = std::get_if<SynthSource>(&spec.data)) return synth_generate(s->n, s->sigma, s->seed);
  return load_csv(std::get<CsvSource>(spec.data).path, FeatureSchema::biomass());
}

PreparedTarget prepare_target(const ExperimentSpec& spec, const DataTable& table, const TargetSpec& target,
                              double train_fraction) {
  PreparedTarget out;
  out.target = target;
  out.train_fraction = train_fraction;
  out.candidate_features = table.schema.feature_names();
  for (const auto& e : target.extra_inputs) out.candidate_features.push_back(e);

  auto [train, test] = train_test_split(table, {train_fraction, derive_seed(spec.seed, kSplitStream)});
  out.standardizer = standardize_fit(train, out.candidate_features);
  const DataTable train_std = standardize_apply(out.standardizer, train);
  const DataTable test_std = standardize_apply(out.standardizer, test);

  out.features = out.candidate_features;
  if (spec.selection.enabled) {
    EliminationOptions options{spec.selection.min_features, spec.selection.cv_folds,
                               derive_seed(spec.seed, kSelectionStream)};
    out.elimination = backward_eliminate(resolve_model(spec, spec.selection.model), train_std, target.column,
                                         out.candidate_features, options);
    out.features = out.elimination->selected;
  }
  out.X_train = train_std.columns(out.features);
  out.y_train = train.column(target.column);
  out.X_test = test_std.columns(out.features);
  out.y_test = test.column(target.column);
  return out;
}

namespace {

std::string failure_code(const std::exception& e) {
  if (const auto* b = dynamic_cast<const Error*>(&e)) return std::string(to_string(b->code()));
  return "Exception";
}

MetricCell cod_cell(const Vector& pred, const Vector& actual) {
  try {
    return {coefficient_of_determination(pred, actual), {}};
  } catch (const Error& e) {
    return {0.0, std::string(to_string(e.code()))};
  }
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string data_description(const ExperimentSpec& spec, const DataTable& table) {
  std::ostringstream s;
  if (const auto* syn = std::get_if<SynthSource>(&spec.data))
    s << "synthetic n=" << syn->n << " sigma=" << format_value(syn->sigma) << " seed=" << syn->seed;
  else
    s << "csv " << std::get<CsvSource>(spec.data).path << " n=" << table.n();
  return s.str();
}

ImportanceResult importance_from(const std::string& model_name, const std::vector<std::string>& features,
                                 const FittedModel& model) {
  ImportanceResult r;
  r.model = model_name;
  r.features = features;
  try {
    r.values = feature_importance(*model);
  } catch (const Error& e) {
    r.failure = std::string(to_string(e.code()));
  }
  return r;
}

std::vector<std::pair<std::string, std::string>> base_metadata(const ExperimentSpec& spec, const DataTable& table,
                                                               const PreparedTarget& p) {
  std::vector<std::pair<std::string, std::string>> md;
  md.emplace_back("target", p.target.name + " (column " + p.target.column + ")");
  md.emplace_back("data", data_description(spec, table));
  md.emplace_back("seed", std::to_string(spec.seed));
  md.emplace_back("split", "train_fraction=" + format_value(p.train_fraction) + " n_train=" +
                               std::to_string(p.y_train.size()) + " n_test=" + std::to_string(p.y_test.size()));
  md.emplace_back("standardization", "z-score of inputs, mean and population std from the training split only");
  md.emplace_back("R2", "squared Pearson correlation of predicted vs actual; 1 - SSE/SST listed separately");
  md.emplace_back("inputs", join(p.features, ","));
  if (p.elimination) {
    std::vector<std::string> removed;
    for (const auto& s : p.elimination->trace) removed.push_back(s.removed);
    md.emplace_back("feature_selection", "backward elimination with " + spec.selection.model + ", " +
                                             std::to_string(spec.selection.cv_folds) + "-fold CV negative MAE; removed " +
                                             (removed.empty() ? std::string("none") : join(removed, ",")));
  } else {
    md.emplace_back("feature_selection", "disabled");
  }
  return md;
}

}  // namespace

TargetResults run_target(const ExperimentSpec& spec, const PreparedTarget& p, const DataTable& table) {
  TargetResults out;
  out.table.target = p.target.name;
  out.elimination = p.elimination;
  std::map<std::string, FittedModel> fitted;
  std::vector<std::pair<std::string, std::string>> failures;
  for (const auto& name : spec.models) {
    ModelRow row;
    row.model = name;
    try {
      const FittedModel model = fit_model(resolve_model(spec, name), p.X_train, p.y_train);
      const Vector pred_train = model->predict(p.X_train);
      const Vector pred_test = model->predict(p.X_test);
      row.train = score_cells(pred_train, p.y_train);
      row.test = score_cells(pred_test, p.y_test);
      row.train_cod = cod_cell(pred_train, p.y_train);
      row.test_cod = cod_cell(pred_test, p.y_test);
      out.scatter.push_back({name, "train", p.y_train, pred_train});
      out.scatter.push_back({name, "test", p.y_test, pred_test});
      fitted[name] = model;
    } catch (const std::exception& e) {
      const std::string code = failure_code(e);
      row.train = row.test = failed_cells(code);
      row.train_cod = row.test_cod = {0.0, code};
      row.failure = e.what();
      failures.emplace_back(name, e.what());
    }
    out.table.rows.push_back(std::move(row));
  }

  if (spec.cv_folds > 0) {
    for (const auto& name : spec.models) {
      CvEntry entry{name, std::nullopt, {}};
      try {
        entry.result = k_fold_cv(resolve_model(spec, name), p.X_train, p.y_train, spec.cv_folds,
                                 derive_seed(spec.seed, kCvStream));
      } catch (const std::exception& e) {
        entry.failure = failure_code(e);
      }
      out.cv.push_back(std::move(entry));
    }
  }

  if (spec.importance) {
    auto it = fitted.find(spec.importance_model);
    if (it != fitted.end())
      out.importance = importance_from(spec.importance_model, p.features, it->second);
    else
      out.importance = compute_importance(spec, p);
  }

  out.table.metadata = base_metadata(spec, table, p);
  out.table.metadata.emplace_back("cv", spec.cv_folds > 0 ? std::to_string(spec.cv_folds) + "-fold on the training split"
                                                          : std::string("disabled"));
  for (const auto& name : spec.models) out.table.metadata.emplace_back("model " + name, describe(resolve_model(spec, name)));
  for (const auto& [name, msg] : failures) out.table.metadata.emplace_back("failure " + name, msg);
  return out;
}

TargetResults run_target(const ExperimentSpec& spec, const PreparedTarget& prepared) {
  return run_target(spec, prepared, load_experiment_data(spec));
}

std::vector<TargetResults> run_experiment(const ExperimentSpec& spec) {
  const DataTable table = load_experiment_data(spec);
  std::vector<TargetResults> out;
  for (const auto& t : spec.targets)
    out.push_back(run_target(spec, prepare_target(spec, table, t, spec.split_fractions.front()), table));
  return out;
}

SplitStudyTable run_split_study(const ExperimentSpec& spec, const DataTable& table, const TargetSpec& target,
                                const std::vector<double>& fractions) {
  SplitStudyTable out;
  out.target = target.name;
  out.fractions = fractions;
  out.models = spec.models;
  out.cells.assign(spec.models.size(), {});
  for (double f : fractions) {
    std::optional<PreparedTarget> p;
    std::string prep_failure;
    try {
      p = prepare_target(spec, table, target, f);
    } catch (const std::exception& e) {
      prep_failure = failure_code(e);
    }
    for (std::size_t m = 0; m < spec.models.size(); ++m) {
      if (!p) {
        out.cells[m].emplace_back(MetricCell{0.0, prep_failure}, MetricCell{0.0, prep_failure});
        continue;
      }
      try {
        const FittedModel model = fit_model(resolve_model(spec, spec.models[m]), p->X_train, p->y_train);
        const MetricCells tr = score_cells(model->predict(p->X_train), p->y_train);
        const MetricCells te = score_cells(model->predict(p->X_test), p->y_test);
        out.cells[m].emplace_back(tr.r2, te.r2);
      } catch (const std::exception& e) {
        const std::string code = failure_code(e);
        out.cells[m].emplace_back(MetricCell{0.0, code}, MetricCell{0.0, code});
      }
    }
  }
  return out;
}

ImportanceResult compute_importance(const ExperimentSpec& spec, const PreparedTarget& p) {
  try {
    const FittedModel model = fit_model(resolve_model(spec, spec.importance_model), p.X_train, p.y_train);
    return importance_from(spec.importance_model, p.features, model);
  } catch (const std::exception& e) {
    ImportanceResult r;
    r.model = spec.importance_model;
    r.features = p.features;
    r.failure = failure_code(e);
    return r;
  }
}

SweepResult run_sweep(const ExperimentSpec& spec, const std::string& which) {
  if (which != "knn" && which != "svr" && which != "rf")
    throw Error(ErrorCode::Config, "unknown sweep '" + which + "' (expected knn, svr or rf)");
  const DataTable table = load_experiment_data(spec);
  SweepData data;
  for (const auto& t : spec.targets) {
    PreparedTarget p = prepare_target(spec, table, t, spec.split_fractions.front());
    data.push_back({t.name, std::move(p.X_train), std::move(p.y_train), std::move(p.X_test), std::move(p.y_test)});
  }
  if (which == "knn") return sweep_knn_k(data, spec.sweeps.knn_ks, std::get<KnnParams>(resolve_model(spec, "KNN").params));
  if (which == "svr")
    return sweep_svr_kernel(data, spec.sweeps.svr_kernels, std::get<SvrParams>(resolve_model(spec, "SVR").params));
  return sweep_rf_trees(data, spec.sweeps.rf_trees, std::get<ForestParams>(resolve_model(spec, "RandomForest").params));
}

}  // namespace bioml
