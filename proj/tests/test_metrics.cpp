// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "metrics.hpp"

#include <array>
#include <cmath>

#include "cross_validation.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "rng.hpp"

using namespace gliomics;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("survival classes with the 300/450 day thresholds") {
  CHECK(classify_survival(250) == SurvivalClass::short_term);
  CHECK(classify_survival(360) == SurvivalClass::intermediate);
  CHECK(classify_survival(500) == SurvivalClass::long_term);
  CHECK(classify_survival(300) == SurvivalClass::intermediate);  // boundary
  CHECK(classify_survival(450) == SurvivalClass::intermediate);
  CHECK(classify_survival(0) == SurvivalClass::short_term);
  CHECK_THROWS_AS(classify_survival(-1), Error);
}

TEST_CASE("perfect predictions") {
  const std::vector<double> v = {100, 400, 800, 200};
  const EvalReport r = compute_metrics(v, v);
  CHECK(r.accuracy == 1.0);
  CHECK(r.mse == 0.0);
  CHECK(r.mse_median == 0.0);
  CHECK(r.spearman_rho == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mse and median-squared-error arithmetic") {
  // Squared errors {0, 3600, 10000}.
  const std::vector<double> pred = {100, 160, 400};
  const std::vector<double> truth = {100, 100, 300};
  const EvalReport r = compute_metrics(pred, truth);
  CHECK(r.mse == doctest::Approx(13600.0 / 3.0));
  CHECK(r.mse_median == 3600.0);

  // Even n: mean of the two middle squared errors.
  const std::vector<double> pred4 = {0, 10, 20, 30};
  const std::vector<double> truth4 = {0, 0, 0, 0};
  const EvalReport r4 = compute_metrics(pred4, truth4);
  CHECK(r4.mse_median == doctest::Approx(0.5 * (100.0 + 400.0)));
}

TEST_CASE("reversed ranks give rho = -1") {
  const std::vector<double> pred = {1, 2, 3};
  const std::vector<double> truth = {30, 20, 10};
  const EvalReport r = compute_metrics(pred, truth);
  CHECK(std::abs(r.spearman_rho + 1.0) <= 1e-12);
}

TEST_CASE("spearman is exactly invariant under monotone transforms") {
  Rng rng(1);
  std::vector<double> a(40), b(40);
  for (std::size_t i = 0; i < 40; ++i) {
    a[i] = rng.uniform(0, 1000);
    b[i] = rng.uniform(0, 1000);
  }
  const double base = spearman_correlation(a, b);
  std::vector<double> transformed(40);
  for (std::size_t i = 0; i < 40; ++i)
    transformed[i] = std::exp(a[i] / 250.0) + 3.0;  // strictly monotone
  CHECK(spearman_correlation(transformed, b) == base);
}

TEST_CASE("average ranks handle ties") {
  const std::vector<double> v = {10, 20, 20, 30};
  const std::vector<double> r = average_ranks(v);
  CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});
}

TEST_CASE("accuracy equals the confusion-matrix trace ratio") {
  Rng rng(2);
  std::vector<double> pred(60), truth(60);
  for (std::size_t i = 0; i < 60; ++i) {
    pred[i] = rng.uniform(0, 900);
    truth[i] = rng.uniform(0, 900);
  }
  const EvalReport r = compute_metrics(pred, truth);

  std::array<std::array<int, 3>, 3> confusion{};
  for (std::size_t i = 0; i < 60; ++i)
    ++confusion[static_cast<int>(classify_survival(pred[i]))]
               [static_cast<int>(classify_survival(truth[i]))];
  const int trace = confusion[0][0] + confusion[1][1] + confusion[2][2];
  CHECK(r.accuracy == doctest::Approx(trace / 60.0));
}

TEST_CASE("mse scales quadratically under uniform scaling") {
  Rng rng(3);
  std::vector<double> pred(30), truth(30);
  for (std::size_t i = 0; i < 30; ++i) {
    pred[i] = rng.uniform(100, 900);
    truth[i] = rng.uniform(100, 900);
  }
  const EvalReport base = compute_metrics(pred, truth);
  const double s = 2.5;
  std::vector<double> ps(30), ts(30);
  for (std::size_t i = 0; i < 30; ++i) {
    ps[i] = s * pred[i];
    ts[i] = s * truth[i];
  }
  const EvalReport scaled = compute_metrics(ps, ts);
  CHECK(scaled.mse == doctest::Approx(s * s * base.mse).epsilon(1e-12));
  CHECK(scaled.mse_median ==
        doctest::Approx(s * s * base.mse_median).epsilon(1e-12));
  CHECK(scaled.spearman_rho == base.spearman_rho);
}

TEST_CASE("zero variance flags an undefined correlation") {
  const std::vector<double> pred = {5, 5, 5};
  const std::vector<double> truth = {1, 2, 3};
  const EvalReport r = compute_metrics(pred, truth);
  CHECK(r.undefined_correlation);
  CHECK(std::isnan(r.spearman_rho));
}

TEST_CASE("length mismatch is a shape error") {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {1, 2};
  try {
    compute_metrics(a, b);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::shape);
  }
}

TEST_CASE("fold assignment partitions with balanced sizes") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 10 + rng.below(90);
    const int k = 2 + static_cast<int>(rng.below(8));
    const std::vector<int> fold = fold_assignment(n, k, trial);
    std::vector<std::size_t> sizes(k, 0);
    for (int f : fold) {
      REQUIRE(f >= 0);
      REQUIRE(f < k);
      ++sizes[f];
    }
    std::size_t lo = n, hi = 0;
    for (std::size_t s : sizes) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    CHECK(hi - lo <= 1);
  }
  CHECK_THROWS_AS(fold_assignment(5, 6, 0), Error);
}

namespace {

FeatureTable toy_table(std::size_t n, Rng& rng, bool constant_target) {
  FeatureTable t;
  t.feature_names = {"f0"};
  t.values = Matrix(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    t.subjects.push_back("S" + std::to_string(r));
    t.values.at(r, 0) = rng.normal();
    t.age.push_back(rng.uniform(40, 70));
    t.survival_days.push_back(constant_target ? 400.0
                                              : rng.uniform(100, 800));
    t.resection_status.push_back(Resection::GTR);
  }
  return t;
}

}  // namespace

TEST_CASE("cv on a constant target: perfect accuracy, zero mse") {
  Rng rng(5);
  const FeatureTable t = toy_table(20, rng, true);
  CvParams params;
  params.k = 5;
  params.seed = 7;
  const CvResult result =
      cross_validate(t, model_spec_preset("baseline"), params);
  CHECK(result.report.accuracy == 1.0);
  CHECK(result.report.mse == doctest::Approx(0.0).epsilon(1e-16));
  CHECK(result.report.undefined_correlation);  // constant predictions
}

TEST_CASE("leave-one-out covers every subject exactly once") {
  Rng rng(6);
  const FeatureTable t = toy_table(10, rng, false);
  CvParams params;
  params.k = 10;
  params.seed = 3;
  const CvResult result =
      cross_validate(t, model_spec_preset("baseline"), params);
  CHECK(result.report.n == 10);
  CHECK(result.oof_predictions.size() == 10);
  CHECK(result.report.per_fold.empty());  // singleton folds aren't scored
}

TEST_CASE("cv can refit feature selection inside each fold") {
  Rng rng(8);
  FeatureTable t;
  t.feature_names = {"f0", "f1", "f2", "f3"};
  t.values = Matrix(24, 4);
  for (auto& v : t.values.data) v = rng.normal();
  for (std::size_t r = 0; r < 24; ++r) {
    t.subjects.push_back("S" + std::to_string(r));
    t.age.push_back(rng.uniform(40, 70));
    t.survival_days.push_back(400.0 + 120.0 * t.values.at(r, 1) +
                              20.0 * rng.normal());
    t.resection_status.push_back(Resection::GTR);
  }

  ModelSpec spec;
  spec.kind = ModelKind::forest;
  spec.run_selection = true;
  spec.append_age = true;
  spec.forest.n_trees = 8;
  spec.forest.min_leaf = 2;
  spec.selection.rfe.forest.n_trees = 6;
  spec.selection.rfe.forest.min_leaf = 2;
  spec.selection.rfe.folds = 2;
  spec.selection.rfe.sizes = {2};

  CvParams params;
  params.k = 3;
  params.seed = 21;
  const CvResult a = cross_validate(t, spec, params);
  const CvResult b = cross_validate(t, spec, params);
  CHECK(a.oof_predictions == b.oof_predictions);
  CHECK(a.report.n == 24);
}

TEST_CASE("cv is deterministic and thread-count independent") {
  Rng rng(7);
  const FeatureTable t = toy_table(30, rng, false);
  ModelSpec spec;
  spec.kind = ModelKind::forest;
  spec.predictors = {"f0", "age"};
  spec.forest.n_trees = 10;
  CvParams serial;
  serial.k = 5;
  serial.seed = 11;
  serial.threads = 1;
  CvParams parallel = serial;
  parallel.threads = 4;
  const CvResult a = cross_validate(t, spec, serial);
  const CvResult b = cross_validate(t, spec, parallel);
  CHECK(a.oof_predictions == b.oof_predictions);
  CHECK(a.report.mse == b.report.mse);
}

TEST_SUITE_END();
