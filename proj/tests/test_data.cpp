#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "bioml/data.hpp"
#include "bioml/error.hpp"
#include "bioml/rng.hpp"
#include "bioml/synth.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace bioml;
using testing::error_code;

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng d(7);
  CHECK(d.next_u64() != c.next_u64());
  CHECK(derive_seed(42, 1) != derive_seed(42, 2));
  CHECK(derive_seed(42, 1) == derive_seed(42, 1));

  Rng r(3);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
  for (int i = 0; i < 1000; ++i) CHECK(r.below(5) < 5u);
}

TEST_CASE("biomass schema layout") {
  const FeatureSchema s = FeatureSchema::biomass();
  CHECK(s.size() == 20);
  CHECK(s.feature_names().size() == 16);
  CHECK(s.target_names == std::vector<std::string>{"SEF", "SCI", "OMF", "RRR"});
  CHECK(s.kinds[s.index_of("crop_rotation")] == ColumnKind::Categorical);
  CHECK(crop_rotation_levels().size() == 4);
  CHECK(s.contains("k_factor"));
  CHECK(error_code([&] { s.index_of("nope"); }) == ErrorCode::MissingColumn);
  s.validate();

  FeatureSchema bad = s;
  bad.names[1] = bad.names[0];
  CHECK(error_code([&] { bad.validate(); }) == ErrorCode::Config);
}

TEST_CASE("csv round trip is lossless") {
  const DataTable t = synth_generate(50, 0.1, 5);
  std::stringstream ss;
  write_csv(ss, t);
  const DataTable back = parse_csv(ss, t.schema);
  REQUIRE(back.n() == 50);
  CHECK((back.rows.array() == t.rows.array()).all());
}

TEST_CASE("csv columns may come in any order; rotation accepts labels") {
  const FeatureSchema s = FeatureSchema::biomass();
  std::vector<std::string> names = s.names;
  std::reverse(names.begin(), names.end());
  std::string header, row;
  for (std::size_t j = 0; j < names.size(); ++j) {
    header += (j ? "," : "") + names[j];
    row += j ? "," : "";
    row += names[j] == "crop_rotation" ? crop_rotation_levels()[2] : std::to_string(j);
  }
  std::stringstream ss(header + "\n" + row + "\n\n");
  const DataTable t = parse_csv(ss, s);
  REQUIRE(t.n() == 1);
  CHECK(t.column("crop_rotation")[0] == 2.0);
  CHECK(t.column(names[0])[0] == 0.0);
  CHECK(t.column(names[5])[0] == 5.0);
}

TEST_CASE("csv errors") {
  const FeatureSchema s = FeatureSchema::biomass();
  std::string header;
  for (std::size_t j = 0; j < s.size(); ++j) header += (j ? "," : "") + s.names[j];
  std::string good;
  for (std::size_t j = 0; j < s.size(); ++j) good += j ? ",1" : "1";

  auto parse = [&](const std::string& text) {
    std::stringstream ss(text);
    return parse_csv(ss, s);
  };
  CHECK(error_code([&] { parse(""); }) == ErrorCode::EmptyFile);
  CHECK(error_code([&] { parse(header + "\n"); }) == ErrorCode::EmptyFile);
  CHECK(error_code([&] { parse(header + ",extra\n" + good + ",1\n"); }) == ErrorCode::SchemaMismatch);
  CHECK(error_code([&] { parse(header.substr(header.find(',') + 1) + "\n"); }) == ErrorCode::MissingColumn);
  CHECK(error_code([&] { parse(header + "\n" + good + ",1\n"); }) == ErrorCode::SchemaMismatch);
  std::string bad = good;
  bad[0] = 'x';
  CHECK(error_code([&] { parse(header + "\n" + bad + "\n"); }) == ErrorCode::NonNumericCell);
  CHECK(error_code([&] { load_csv("/nonexistent/file.csv", s); }) == ErrorCode::Io);
  CHECK(parse(header + "\n" + good + "\n").n() == 1);
}

TEST_CASE("format_shortest round-trips") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-8, 8));
    CHECK(std::stod(format_shortest(v)) == v);
  }
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(2.0) == "2");
}

TEST_CASE("standardizer uses the fitting rows and inverts") {
  const DataTable t = synth_generate(200, 0.1, 3);
  const auto feats = t.schema.feature_names();
  const Standardizer st = standardize_fit(t, feats);
  const DataTable z = standardize_apply(st, t);
  for (const auto& f : feats) {
    const Vector c = z.column(f);
    CHECK(c.mean() == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    const double var = (c.array() - c.mean()).square().mean();
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK((z.column("SEF").array() == t.column("SEF").array()).all());
  const DataTable back = standardize_invert(st, z);
  CHECK((back.rows - t.rows).cwiseAbs().maxCoeff() < 1e-12);

  DataTable c = t;
  c.rows.col(c.schema.index_of("noise_2")).setConstant(4.0);
  const Standardizer sc = standardize_fit(c, {"noise_2"});
  CHECK(sc.stds[0] == 1.0);
  CHECK(standardize_apply(sc, c).column("noise_2").cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("train/test split partitions the rows") {
  for (double f : {0.8, 0.7, 0.6}) {
    const SplitIndices s = split_indices(97, {f, 42});
    CHECK(s.train.size() == static_cast<std::size_t>(std::floor(f * 97 + 1e-9)));
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
  }
  CHECK(split_indices(10, {0.7, 1}).train.size() == 7);
  CHECK(split_indices(50, {0.8, 9}).train == split_indices(50, {0.8, 9}).train);
  CHECK(split_indices(50, {0.8, 9}).train != split_indices(50, {0.8, 10}).train);
  CHECK(error_code([] { split_indices(10, {0.0, 1}); }) == ErrorCode::Config);
  CHECK(error_code([] { split_indices(10, {1.5, 1}); }) == ErrorCode::Config);
  CHECK(error_code([] { split_indices(1, {0.5, 1}); }) == ErrorCode::DegenerateSplit);
  CHECK(error_code([] { split_indices(10, {1.0 - 1e-12, 1}); }) == ErrorCode::DegenerateSplit);
}

TEST_CASE("folds have balanced sizes and cover every row once") {
  for (std::size_t n : {10u, 11u, 37u}) {
    for (std::size_t k : {2u, 3u, 5u, 10u}) {
      const auto folds = make_folds(n, k, 17);
      REQUIRE(folds.size() == k);
      std::vector<std::size_t> all;
      for (std::size_t f = 0; f < k; ++f) {
        CHECK(folds[f].size() == n / k + (f < n % k ? 1 : 0));
        CHECK(std::is_sorted(folds[f].begin(), folds[f].end()));
        all.insert(all.end(), folds[f].begin(), folds[f].end());
        const auto rest = fold_complement(folds, f);
        CHECK(rest.size() == n - folds[f].size());
        for (auto r : rest) CHECK(!std::binary_search(folds[f].begin(), folds[f].end(), r));
      }
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < n; ++i) CHECK(all[i] == i);
    }
  }
  CHECK(error_code([] { make_folds(10, 1, 0); }) == ErrorCode::InvalidFolds);
  CHECK(error_code([] { make_folds(3, 4, 0); }) == ErrorCode::InvalidFolds);
}

TEST_CASE("synthetic generator matches its formulas") {
  const DataTable t = synth_generate(300, 0.0, 21);
  const auto& s = t.schema;
  for (Eigen::Index i = 0; i < 300; ++i) {
    auto v = [&](const char* name) { return t.rows(i, static_cast<Eigen::Index>(s.index_of(name))); };
    const oracle::SynthRow r{v("corn_yield"),  v("soybean_yield"),      v("wheat_yield"), v("soil_erodibility"),
                             v("clay"),        v("silt"),               v("sand"),        v("organic_matter"),
                             v("rainfall_erosivity"), v("slope"),       v("slope_length"), v("k_factor"),
                             v("crop_rotation"), v("residue_removal_rate")};
    CHECK(r.sand == doctest::Approx(1 - r.clay - r.silt).epsilon(1e-12));
    CHECK(r.corn >= 6.0);
    CHECK(r.corn <= 13.0);
    CHECK(r.rr >= 0.0);
    CHECK(r.rr <= 0.9);
    CHECK((r.K > 0.24 && r.K < 0.40));
    CHECK(r.rot == std::floor(r.rot));
    const double sef = oracle::sef(r), sci = oracle::sci(r), omf = oracle::omf(r);
    CHECK(v("SEF") == doctest::Approx(sef).epsilon(1e-12));
    CHECK(v("SCI") == doctest::Approx(sci).epsilon(1e-12));
    CHECK(v("OMF") == doctest::Approx(omf).epsilon(1e-12));
    CHECK(v("RRR") == doctest::Approx(oracle::rrr(r, sef, sci, omf)).epsilon(1e-12));
  }
}

TEST_CASE("synthetic noise is close to the documented scale") {
  const DataTable clean = synth_generate(4000, 0.0, 8);
  const DataTable noisy = synth_generate(4000, 0.1, 8);
  const std::pair<const char*, double> scales[] = {
      {"SEF", SynthScales::sef}, {"SCI", SynthScales::sci}, {"OMF", SynthScales::omf}};
  for (const auto& [name, scale] : scales) {
    const Vector c = clean.column(name);
    const double sd = std::sqrt((c.array() - c.mean()).square().mean());
    CHECK(sd == doctest::Approx(scale).epsilon(0.15));
    const Vector e = noisy.column(name) - c;
    const double noise_sd = std::sqrt(e.array().square().mean());
    CHECK(noise_sd == doctest::Approx(0.1 * scale).epsilon(0.1));
  }
  CHECK(error_code([] { synth_generate(0, 0.1, 1); }) == ErrorCode::InvalidSize);
  CHECK(error_code([] { synth_generate(5, -1, 1); }) == ErrorCode::Config);
  const auto noise = synth_noise_features();
  for (const char* t : {"SEF", "SCI", "OMF", "RRR"}) {
    const auto g = synth_generative_features(t);
    for (const auto& nf : noise) CHECK(std::find(g.begin(), g.end(), nf) == g.end());
  }
}
