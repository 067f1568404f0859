#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bioml/data.hpp"
#include "bioml/experiment.hpp"
#include "bioml/synth.hpp"

using namespace bioml;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "bioml_cli_test";

int run_cli(const std::string& args, std::string* out = nullptr) {
  const fs::path log = kWork / "stdout.txt";
  const std::string cmd = std::string("\"") + BIOML_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(log);
    std::ostringstream s;
    s << in.rdbuf();
    *out = s.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
  ~Workdir() { fs::remove_all(kWork); }
};

const char* kConfig = R"({
  "data": {"synthetic": {"n": 120, "seed": 5}},
  "targets": ["OMF"],
  "models": ["LinearRegression", "KNN", "RandomForest"],
  "split_fractions": [0.8, 0.6],
  "seed": 5,
  "hyperparameters": {"RandomForest": {"n_trees": 4}},
  "cv_folds": 3,
  "sweeps": {"enabled": true, "knn_k": [1, 3], "svr_kernels": ["rbf"], "rf_trees": [1, 2]},
  "feature_selection": {"enabled": false, "cv_folds": 3}
})";

}  // namespace

TEST_CASE("cli help and usage errors") {
  Workdir w;
  std::string out;
  CHECK(run_cli("--help", &out) == 0);
  for (const char* sub : {"synth", "run", "sweep", "select", "importance"}) CHECK(out.find(sub) != std::string::npos);
  CHECK(run_cli("run --help", &out) == 0);
  CHECK(out.find("--config") != std::string::npos);
  CHECK(out.find("--out") != std::string::npos);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("run") == 2);
  CHECK(run_cli("sweep --which nope --config x.json") == 2);
}

TEST_CASE("cli exit codes follow the error category") {
  Workdir w;
  write(kWork / "bad.json", R"({"bogus": true})");
  CHECK(run_cli("run --config \"" + (kWork / "bad.json").string() + "\"") == 2);
  write(kWork / "folds.json", R"({"targets": ["SEF"], "feature_selection": {"cv_folds": 1}})");
  CHECK(run_cli("select --config \"" + (kWork / "folds.json").string() + "\"") == 2);
  CHECK(run_cli("synth --n 0 --out \"" + (kWork / "x.csv").string() + "\"") == 2);

  CHECK(run_cli("run --config \"" + (kWork / "missing.json").string() + "\"") == 3);
  write(kWork / "csv.json", R"({"targets": ["SEF"], "data": {"csv": ")" + (kWork / "none.csv").string() + R"("}})");
  CHECK(run_cli("run --config \"" + (kWork / "csv.json").string() + "\"") == 3);
  write(kWork / "broken.csv", "corn_yield\n1\n");
  write(kWork / "csv2.json", R"({"targets": ["SEF"], "data": {"csv": ")" + (kWork / "broken.csv").string() + R"("}})");
  std::string out;
  CHECK(run_cli("run --config \"" + (kWork / "csv2.json").string() + "\"", &out) == 3);
  CHECK(out.find("MissingColumn") != std::string::npos);

  write(kWork / "svr.json", R"({"data": {"synthetic": {"n": 80, "seed": 1}}, "targets": ["SEF"],
    "hyperparameters": {"SVR": {"max_passes": 1, "C": 100}},
    "feature_selection": {"model": "SVR", "cv_folds": 3}})");
  CHECK(run_cli("select --config \"" + (kWork / "svr.json").string() + "\" --out \"" + (kWork / "o").string() +
                "\"",
                &out) == 4);
  CHECK(out.find("ConvergenceError") != std::string::npos);
}

TEST_CASE("cli artifacts byte-equal the library's") {
  Workdir w;
  const fs::path cfg = kWork / "config.json";
  write(cfg, kConfig);
  const ExperimentSpec spec = load_experiment_spec(cfg);
  const fs::path cli = kWork / "cli", lib = kWork / "lib";

  std::string out;
  REQUIRE(run_cli("run --config \"" + cfg.string() + "\" --out \"" + cli.string() + "\"", &out) == 0);
  const auto files = write_run_outputs(spec, lib);
  CHECK(files.size() > 10);
  for (const auto& f : files) {
    CHECK(out.find((cli / f).string()) != std::string::npos);
    CHECK(slurp(cli / f) == slurp(lib / f));
  }

  for (const char* which : {"knn", "svr", "rf"}) {
    REQUIRE(run_cli(std::string("sweep --which ") + which + " --config \"" + cfg.string() + "\" --out \"" +
                    (kWork / "cs").string() + "\"") == 0);
    write_sweep_outputs(spec, which, kWork / "ls");
    const std::string name = std::string("sweep_") + which + ".tsv";
    CHECK(slurp(kWork / "cs" / name) == slurp(kWork / "ls" / name));
  }

  REQUIRE(run_cli("select --config \"" + cfg.string() + "\" --out \"" + (kWork / "csel").string() + "\"") == 0);
  for (const auto& f : write_selection_outputs(spec, kWork / "lsel"))
    CHECK(slurp(kWork / "csel" / f) == slurp(kWork / "lsel" / f));

  REQUIRE(run_cli("importance --config \"" + cfg.string() + "\" --out \"" + (kWork / "cimp").string() + "\"") == 0);
  for (const auto& f : write_importance_outputs(spec, kWork / "limp"))
    CHECK(slurp(kWork / "cimp" / f) == slurp(kWork / "limp" / f));

  const fs::path csv = kWork / "synth.csv";
  REQUIRE(run_cli("synth --n 50 --sigma 0.2 --seed 9 --out \"" + csv.string() + "\"", &out) == 0);
  CHECK(out.find("rows: 50") != std::string::npos);
  std::ostringstream ref;
  write_csv(ref, synth_generate(50, 0.2, 9));
  CHECK(slurp(csv) == ref.str());
}
