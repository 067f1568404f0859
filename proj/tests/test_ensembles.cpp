#include <doctest.h>

#include "bioml/data.hpp"
#include "bioml/ensembles.hpp"
#include "bioml/error.hpp"
#include "bioml/forest.hpp"
#include "bioml/knn.hpp"
#include "bioml/linear.hpp"
#include "bioml/model_spec.hpp"
#include "helpers.hpp"

using namespace bioml;
using testing::error_code;

namespace {

NamedFitter ols() {
  return {"LinearRegression", [](const Matrix& X, const Vector& y) -> FittedModel { return ols_fit(X, y); }};
}

NamedFitter knn(std::size_t k) {
  return {"KNN", [k](const Matrix& X, const Vector& y) -> FittedModel {
            return knn_fit(X, y, {k, KnnMetric::Euclidean, 3.0});
          }};
}

NamedFitter tree() {
  return {"DecisionTree", [](const Matrix& X, const Vector& y) -> FittedModel { return tree_fit(X, y, {3, 2, 1}); }};
}

}  // namespace

TEST_CASE("voting averages its members") {
  Rng rng(40);
  const Matrix X = testing::random_matrix(rng, 50, 2);
  const Vector y = testing::random_vector(rng, 50);
  const auto v = voting_fit({ols(), knn(3), tree()}, X, y);
  const Vector a = ols_fit(X, y)->predict(X);
  const Vector b = knn_fit(X, y, {3, KnnMetric::Euclidean, 3.0})->predict(X);
  const Vector c = tree_fit(X, y, {3, 2, 1})->predict(X);
  CHECK((v->predict(X) - (a + b + c) / 3.0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(v->member_names().size() == 3);
  CHECK(v->predict(Vector(X.row(4).transpose())) == doctest::Approx(v->predict(X)[4]));
  CHECK(error_code([&] { voting_fit({ols()}, X, y); }) == ErrorCode::Config);
}

TEST_CASE("voting member failures keep the code and name the member") {
  Rng rng(41);
  const Matrix X = testing::random_matrix(rng, 5, 2);
  const Vector y = testing::random_vector(rng, 5);
  try {
    voting_fit({ols(), knn(9)}, X, y);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidK);
    CHECK(e.detail().find("member 'KNN'") == 0);
  }
}

TEST_CASE("stacking meta features are out of fold") {
  Rng rng(42);
  const Matrix X = testing::random_matrix(rng, 43, 2);
  const Vector y = X.col(0).array() * 2 + testing::random_vector(rng, 43).array() * 0.1;
  const auto s = stacking_fit({ols(), knn(2)}, ols(), X, y, {4, 9});
  const Matrix& meta = s->meta_features();
  REQUIRE(meta.rows() == 43);
  REQUIRE(meta.cols() == 2);
  REQUIRE(s->folds().size() == 4);
  CHECK(s->folds() == make_folds(43, 4, 9));
  for (std::size_t f = 0; f < 4; ++f) {
    const auto train = fold_complement(s->folds(), f);
    const auto m0 = ols_fit(take_rows(X, train), take_rows(y, train));
    const auto m1 = knn_fit(take_rows(X, train), take_rows(y, train), {2, KnnMetric::Euclidean, 3.0});
    for (auto r : s->folds()[f]) {
      const Vector x = X.row(static_cast<Eigen::Index>(r)).transpose();
      CHECK(meta(static_cast<Eigen::Index>(r), 0) == doctest::Approx(m0->predict(x)).epsilon(1e-12));
      CHECK(meta(static_cast<Eigen::Index>(r), 1) == m1->predict(x));
    }
  }
  // final model is OLS on the meta features, bases refit on all rows
  const auto fin = ols_fit(meta, y);
  Matrix full(43, 2);
  full.col(0) = ols_fit(X, y)->predict(X);
  full.col(1) = knn_fit(X, y, {2, KnnMetric::Euclidean, 3.0})->predict(X);
  CHECK((s->predict(X) - fin->predict(full)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(error_code([&] { stacking_fit({}, ols(), X, y, {4, 9}); }) == ErrorCode::Config);
  CHECK(error_code([&] { stacking_fit({ols()}, ols(), X, y, {1, 9}); }) == ErrorCode::InvalidFolds);
  CHECK(error_code([&] { stacking_fit({ols()}, ols(), X, y, {44, 9}); }) == ErrorCode::InvalidFolds);
}

TEST_CASE("model specs: defaults, presets, overrides") {
  CHECK(independent_model_names().size() == 8);
  for (const auto& n : independent_model_names()) CHECK(default_model_spec(n).name == n);
  CHECK(error_code([] { default_model_spec("Nope"); }) == ErrorCode::Config);
  CHECK(is_known_model("stack-paper"));

  const ModelSpec vote = preset_model_spec("vote-paper", {});
  const auto& members = std::get<VotingSpec>(vote.params).members;
  REQUIRE(members.size() == 3);
  CHECK(members[0].name == "DecisionTree");
  CHECK(members[1].name == "GradientBoosting");
  CHECK(members[2].name == "RandomForest");
  const ModelSpec stack = preset_model_spec("stack-paper", {});
  const auto& st = std::get<StackingSpec>(stack.params);
  CHECK(st.bases.size() == 5);
  REQUIRE(st.final_model.size() == 1);
  CHECK(std::holds_alternative<VotingSpec>(st.final_model[0].params));

  const ModelSpec knn = apply_overrides(default_model_spec("KNN"), R"({"k": 7, "metric": "manhattan"})");
  CHECK(std::get<KnnParams>(knn.params).k == 7);
  CHECK(std::get<KnnParams>(knn.params).metric == KnnMetric::Manhattan);
  CHECK(describe(knn).find("\"k\":7") != std::string::npos);
  CHECK(error_code([] { apply_overrides(default_model_spec("KNN"), R"({"kk": 7})"); }) == ErrorCode::Config);
  CHECK(error_code([] { apply_overrides(default_model_spec("KNN"), R"({"k": "x"})"); }) == ErrorCode::Config);
  const ModelSpec rf = apply_overrides(default_model_spec("RandomForest"), R"({"n_trees": 3, "max_depth": 2})");
  CHECK(std::get<ForestParams>(rf.params).n_trees == 3);
  CHECK(std::get<ForestParams>(rf.params).tree.max_depth == std::size_t{2});

  const ModelSpec seeded = with_seed(stack, 99);
  const auto& ss = std::get<StackingSpec>(seeded.params);
  CHECK(ss.seed == 99);
  const auto& fv = std::get<VotingSpec>(ss.final_model[0].params).members;
  CHECK(std::get<ForestParams>(fv[1].params).seed != 0);
}

TEST_CASE("fit_model runs every preset") {
  Rng rng(43);
  const Matrix X = testing::random_matrix(rng, 40, 3);
  const Vector y = X.col(0) + testing::random_vector(rng, 40) * 0.1;
  std::map<std::string, ModelSpec> small;
  for (const auto& n : independent_model_names()) small[n] = default_model_spec(n);
  small["MLP"] = apply_overrides(small["MLP"], R"({"epochs": 5, "hidden_layers": [4]})");
  small["RandomForest"] = apply_overrides(small["RandomForest"], R"({"n_trees": 5})");
  small["GradientBoosting"] = apply_overrides(small["GradientBoosting"], R"({"n_estimators": 5})");
  for (const auto& n : preset_model_names()) {
    const FittedModel m = fit_model(with_seed(preset_model_spec(n, small), 1), X, y);
    CHECK(m->predict(X).size() == 40);
    CHECK(m->predict(X).allFinite());
  }
}
