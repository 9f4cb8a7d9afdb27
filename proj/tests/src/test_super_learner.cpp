#include <doctest.h>

#include <cmath>
#include <vector>

#include "cartelscreen/errors.hpp"
#include "cartelscreen/model_io.hpp"
#include "cartelscreen/rng.hpp"
#include "cartelscreen/super_learner.hpp"
#include "test_helpers.hpp"

using namespace cartelscreen;

namespace {

FeatureTable blob_table(int n, int p, std::uint64_t seed, double gap = 2.0) {
  Rng rng(seed);
  FeatureTable t;
  for (int j = 0; j < p; ++j) t.names.push_back("f" + std::to_string(j));
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    std::vector<double> row(p);
    for (int j = 0; j < p; ++j) {
      row[j] = rng.normal() + (j < 2 && label ? gap : 0.0);
    }
    t.rows.push_back(std::move(row));
    t.labels.push_back(label);
    t.tender_ids.push_back("Z:2016-01-01:" + std::to_string(i));
  }
  return t;
}

double residual_norm(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& x,
                     const std::vector<double>& b) {
  double ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double r = -b[i];
    for (std::size_t j = 0; j < x.size(); ++j) r += a[i][j] * x[j];
    ss += r * r;
  }
  return std::sqrt(ss);
}

}  // namespace

TEST_CASE("nnls solves small problems exactly") {
  // identity design: negative targets clamp to zero
  const std::vector<std::vector<double>> eye = {{1, 0}, {0, 1}};
  const auto x = nnls(eye, {3, -2});
  REQUIRE(x.size() == 2);
  CHECK(x[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(x[1] == 0.0);

  // interior solution matches unconstrained least squares
  const std::vector<std::vector<double>> a = {{1, 0}, {1, 1}, {0, 1}};
  const auto z = nnls(a, {1, 2, 1});
  CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(z[1] == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(nnls({}, {}), InputError);
  CHECK_THROWS_AS(nnls(eye, {1.0}), InputError);
}

TEST_CASE("nnls satisfies the KKT conditions on random problems") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 6 + rng.uniform_int(10);
    const std::size_t k = 2 + rng.uniform_int(4);
    std::vector<std::vector<double>> a(n, std::vector<double>(k));
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = rng.normal();
      for (std::size_t j = 0; j < k; ++j) a[i][j] = rng.uniform(0, 1);
    }
    const auto x = nnls(a, b);
    // gradient of 0.5|Ax-b|^2
    std::vector<double> g(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double r = -b[i];
      for (std::size_t j = 0; j < k; ++j) r += a[i][j] * x[j];
      for (std::size_t j = 0; j < k; ++j) g[j] += a[i][j] * r;
    }
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(x[j] >= 0.0);
      if (x[j] > 1e-10) {
        CHECK(std::abs(g[j]) < 1e-8);  // active coordinates are stationary
      } else {
        CHECK(g[j] > -1e-8);  // zero coordinates must not want to grow
      }
    }
  }
}

TEST_CASE("nnls puts tied duplicate columns on the first copy") {
  const std::vector<std::vector<double>> a = {{1, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  const auto x = nnls(a, {2, 2, 3});
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(x[1] == 0.0);
  CHECK(x[2] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(residual_norm(a, x, {2, 2, 3}) < 1e-10);
}

TEST_CASE("out-of-fold matrix has one probability column per learner") {
  const FeatureTable t = blob_table(40, 3, 7);
  const auto z = super_learner_oof(t, testutil::tiny_lc(), 5);
  REQUIRE(z.size() == 40);
  for (const auto& row : z) {
    REQUIRE(row.size() == 5);
    for (const double p : row) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
  // separable blobs: every out-of-fold learner should rank classes correctly
  for (std::size_t m = 0; m < 5; ++m) {
    double pos = 0, neg = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      (t.labels[i] ? pos : neg) += z[i][m];
    }
    CHECK(pos / 20.0 > neg / 20.0);
  }
}

TEST_CASE("super learner weights form a simplex point and reproduce") {
  const FeatureTable t = blob_table(44, 4, 13);
  const LearnerConfig lc = testutil::tiny_lc();
  const TrainedEnsemble model = fit_super_learner(t, lc, 21);

  double sum = 0;
  for (const double w : model.weights) {
    CHECK(w >= 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.feature_names == t.names);

  const TrainedEnsemble again = fit_super_learner(t, lc, 21);
  CHECK(again.weights == model.weights);
  const TrainedEnsemble other = fit_super_learner(t, lc, 22);
  const auto p0 = model.predict_proba(t.rows[0]);
  CHECK(p0 == again.predict_proba(t.rows[0]));
  CHECK(p0 >= 0.0);
  CHECK(p0 <= 1.0);
  (void)other;  // different seed must still be a valid fit
}

TEST_CASE("ensemble prediction blends the base learners") {
  const FeatureTable t = blob_table(40, 3, 29, 3.0);
  const TrainedEnsemble model = fit_super_learner(t, testutil::tiny_lc(), 9);
  const auto bases = model.base_probabilities(t.rows[1]);  // a class-1 row
  double blended = 0;
  for (std::size_t m = 0; m < 5; ++m) blended += model.weights[m] * bases[m];
  CHECK(model.predict_proba(t.rows[1]) == doctest::Approx(blended).epsilon(1e-15));
  // well-separated blobs classify cleanly at the 0.5 threshold
  int correct = 0;
  for (std::size_t i = 0; i < t.n(); ++i) {
    correct += model.classify(t.rows[i]) == (t.labels[i] == 1);
  }
  CHECK(correct >= 38);
  CHECK_THROWS_AS(model.predict_proba({1.0}), InputError);
}

TEST_CASE("the ensemble refuses tiny training sets") {
  const FeatureTable t = blob_table(19, 3, 3);
  CHECK_THROWS_AS(fit_super_learner(t, testutil::tiny_lc(), 1), DatasetError);
}

TEST_CASE("model container round-trips bit-exactly") {
  testutil::TempDir dir("model_io");
  const FeatureTable t = blob_table(40, 3, 41);
  const TrainedEnsemble model = fit_super_learner(t, testutil::tiny_lc(), 33);

  const std::string path = dir.path("m.model");
  save_ensemble(model, path);
  const TrainedEnsemble loaded = load_ensemble(path);

  CHECK(loaded.weights == model.weights);
  CHECK(loaded.feature_names == model.feature_names);
  CHECK(loaded.seed == model.seed);
  CHECK(loaded.lasso.lambda == model.lasso.lambda);
  for (const auto& row : t.rows) {
    CHECK(loaded.predict_proba(row) == model.predict_proba(row));
  }

  // saving the loaded model reproduces the file byte for byte
  const std::string path2 = dir.path("m2.model");
  save_ensemble(loaded, path2);
  CHECK(testutil::read_file(path) == testutil::read_file(path2));
}

TEST_CASE("model loading rejects damaged containers") {
  testutil::TempDir dir("model_bad");
  const FeatureTable t = blob_table(40, 3, 43);
  const TrainedEnsemble model = fit_super_learner(t, testutil::tiny_lc(), 3);
  const std::string path = dir.path("m.model");
  save_ensemble(model, path);

  // truncate at 60% of the file
  const std::string full = testutil::read_file(path);
  testutil::write_file(dir.path("trunc.model"),
                       full.substr(0, full.size() * 6 / 10));
  CHECK_THROWS_AS(load_ensemble(dir.path("trunc.model")), SchemaError);

  testutil::write_file(dir.path("garbage.model"), "not a model\n");
  CHECK_THROWS_AS(load_ensemble(dir.path("garbage.model")), SchemaError);
  CHECK_THROWS_AS(load_ensemble(dir.path("missing.model")), IoError);
}
