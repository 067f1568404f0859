// Command-line front end: every subcommand forwards to one library call.
#include <CLI11.hpp>

#include <iostream>

#include "bioml/data.hpp"
#include "bioml/error.hpp"
#include "bioml/experiment.hpp"
#include "bioml/synth.hpp"

namespace {

int exit_code(bioml::ErrorCategory c) {
  switch (c) {
    case bioml::ErrorCategory::Config: return 2;
    case bioml::ErrorCategory::Data: return 3;
    case bioml::ErrorCategory::Model: return 4;
  }
  return 4;
}

void print_written(const std::filesystem::path& dir, const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << (dir / f).string() << '\n';
}

std::filesystem::path output_dir(const bioml::ExperimentSpec& spec, const std::string& flag) {
  return flag.empty() ? std::filesystem::path(spec.output_dir) : std::filesystem::path(flag);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regression benchmark for biomass sustainability indicators"};
  app.require_subcommand(1);

  std::size_t n = 2000;
  double sigma = 0.1;
  std::uint64_t seed = 42;
  std::string csv_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic data set as CSV");
  synth->add_option("--n", n, "Number of rows (>= 1)")->capture_default_str();
  synth->add_option("--sigma", sigma, "Noise scale relative to each target's spread (>= 0)")->capture_default_str();
  synth->add_option("--seed", seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", csv_out, "Output CSV path")->required();

  std::string config;
  std::string out_dir;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory (default: output_dir from the config)");
  };
  auto* run = app.add_subcommand("run", "Fit every configured model and write reports and plot data");
  add_config(run);
  std::string which;
  auto* sweep = app.add_subcommand("sweep", "Hyperparameter sweep (kNN k, SVR kernel or forest size)");
  sweep->add_option("--which", which, "knn, svr or rf")->required()->check(CLI::IsMember({"knn", "svr", "rf"}));
  add_config(sweep);
  auto* select = app.add_subcommand("select", "Backward elimination of input features");
  add_config(select);
  auto* importance = app.add_subcommand("importance", "Impurity-based feature importance");
  add_config(importance);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      const bioml::DataTable table = bioml::synth_generate(n, sigma, seed);
      bioml::write_csv(std::filesystem::path(csv_out), table);
      const auto features = table.schema.feature_names();
      std::cout << "rows: " << table.n() << "\ncolumns: " << table.p() << " (" << features.size() << " features, "
                << table.schema.target_names.size() << " targets)\nfeatures:";
      for (const auto& f : features) std::cout << ' ' << f;
      std::cout << "\ntargets:";
      for (const auto& t : table.schema.target_names) std::cout << ' ' << t;
      std::cout << "\ncrop_rotation codes:";
      const auto& levels = bioml::crop_rotation_levels();
      for (std::size_t i = 0; i < levels.size(); ++i) std::cout << ' ' << i << '=' << levels[i];
      std::cout << "\nwrote " << csv_out << '\n';
      return 0;
    }
    const bioml::ExperimentSpec spec = bioml::load_experiment_spec(config);
    const auto dir = output_dir(spec, out_dir);
    if (*run) print_written(dir, bioml::write_run_outputs(spec, dir));
    if (*sweep) print_written(dir, bioml::write_sweep_outputs(spec, which, dir));
    if (*select) print_written(dir, bioml::write_selection_outputs(spec, dir));
    if (*importance) print_written(dir, bioml::write_importance_outputs(spec, dir));
    return 0;
  } catch (const bioml::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
