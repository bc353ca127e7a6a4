// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <filesystem>

#include "doctest.h"
#include "errors.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"
#include "text_io.hpp"

using namespace gliomics;
using gliomics::testing::TempDir;

TEST_SUITE_BEGIN("pipeline");

namespace {

LabelVolume default_phantom(double ric = 0.5) {
  PhantomSpec spec;
  spec.wt_semiaxes = {14, 10, 7};
  spec.ric = ric;
  spec.geom = testing::cube_geom(40);
  return make_phantom(spec);
}

CohortSpec tiny_cohort_spec(int n, std::uint64_t seed) {
  CohortSpec spec;
  spec.n_subjects = n;
  spec.geom = testing::cube_geom(32);
  spec.wt_a1_range = {8, 11};
  spec.wt_a2_range = {6.5, 8};
  spec.wt_a3_range = {5, 6.5};
  spec.ric_range = {0.45, 0.95};
  spec.noise_sd = 30.0;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("feature-name schema matches the golden file") {
  const std::string golden =
      read_text_file(std::string(GLIOMICS_TEST_DATA_DIR) +
                     "/feature_names.txt");
  std::ostringstream current;
  for (const auto& name : canonical_feature_names()) current << name << '\n';
  CHECK(current.str() == golden);
}

TEST_CASE("extract_all produces the canonical 163-entry vector") {
  const LabelVolume vol = default_phantom();
  const FeatureVector vec = extract_all(vol);
  CHECK(vec.values.size() == kTotalFeatureCount);
  CHECK(canonical_feature_names().size() == kTotalFeatureCount);
  CHECK(canonical_feature_names().front() == "WT_shape_center_X");
  CHECK(canonical_feature_names()[13] == "WT_glcm_Autocorrelation");
  CHECK(canonical_feature_names()[81] == "TC_shape_center_X");
  CHECK(canonical_feature_names().back() == "RIC");
  for (double v : vec.values) CHECK(std::isfinite(v));
}

TEST_CASE("TC == WT phantom reports RIC 1") {
  const FeatureVector vec = extract_all(default_phantom(1.0));
  CHECK(vec.values.back() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("extraction is bit-for-bit deterministic") {
  const LabelVolume vol = default_phantom();
  const FeatureVector a = extract_all(vol);
  const FeatureVector b = extract_all(vol);
  CHECK(a.values == b.values);
}

TEST_CASE("extract_all rejects volumes without a tumor core") {
  LabelVolume vol(testing::cube_geom(16));
  for (int i = 4; i < 10; ++i) vol.at(i, 8, 8) = 2;  // edema only
  try {
    extract_all(vol);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_roi);
  }
}

TEST_CASE("extract_cohort joins metadata and records failures") {
  TempDir dir("cohort_extract");
  make_cohort(tiny_cohort_spec(3, 9), dir.path());
  // A subject directory with no usable segmentation.
  std::filesystem::create_directories(dir.file("S999"));
  write_text_file(dir.file("S999/readme.txt"), "not a volume\n");

  const CohortExtraction result = extract_cohort(dir.path(), {}, 2);
  CHECK(result.table.n_subjects() == 3);
  CHECK(result.table.feature_names == canonical_feature_names());
  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].subject == "S999");

  // Subjects missing from cohort.csv are excluded with a reason.
  TempDir dir2("cohort_extract2");
  make_cohort(tiny_cohort_spec(2, 10), dir2.path());
  write_text_file(dir2.file("cohort.csv"),
                  "id,age,survival_days,resection_status,true_ric\n"
                  "S000,60,500,GTR,0.5\n");
  const CohortExtraction partial = extract_cohort(dir2.path(), {}, 1);
  CHECK(partial.table.n_subjects() == 1);
  REQUIRE(partial.failures.size() == 1);
  CHECK(partial.failures[0].subject == "S001");
}

TEST_CASE("run_study persists every stage and reproduces byte-identically") {
  TempDir data("study_data");
  make_cohort(tiny_cohort_spec(24, 31), data.path());

  StudyConfig config;
  config.input_dir = data.path();
  config.seed = 13;
  config.k_folds = 4;
  config.threads = 2;
  config.selection.rfe.forest.n_trees = 10;
  config.selection.rfe.folds = 3;
  config.selection.rfe.sizes = {2, 4};
  config.forest.n_trees = 15;
  config.svr.epsilon = 30.0;

  TempDir out_a("study_a");
  config.output_dir = out_a.path();
  const nlohmann::json report = run_study(config);

  CHECK(report.at("n_train").get<std::size_t>() == 24);
  for (const char* model : {"baseline", "radiomics", "invasiveness"}) {
    CHECK(report.at("models").contains(model));
    CHECK(report.at("models").at(model).contains("train"));
    CHECK(report.at("models").at(model).contains("cv"));
  }
  CHECK(report.contains("age_survival_pearson_r"));
  CHECK(std::filesystem::exists(out_a.file("features.csv")));
  CHECK(std::filesystem::exists(out_a.file("selection.json")));
  CHECK(std::filesystem::exists(out_a.file("selected_features.txt")));
  CHECK(std::filesystem::exists(out_a.file("models/invasiveness.json")));
  CHECK(std::filesystem::exists(out_a.file("report.json")));
  CHECK(std::filesystem::exists(out_a.file("report.txt")));

  const std::string text = study_report_text(report);
  CHECK(text.find("baseline") != std::string::npos);
  CHECK(text.find("Cross-validation") != std::string::npos);

  TempDir out_b("study_b");
  config.output_dir = out_b.path();
  run_study(config);
  CHECK(read_text_file(out_a.file("features.csv")) ==
        read_text_file(out_b.file("features.csv")));
  // Reports differ only in the output path, which is not recorded.
  CHECK(read_text_file(out_a.file("report.json")) ==
        read_text_file(out_b.file("report.json")));
}

TEST_CASE("run_study scores a holdout directory with the trained models") {
  TempDir data("study_hd_train");
  make_cohort(tiny_cohort_spec(16, 41), data.path());
  TempDir holdout("study_hd_hold");
  make_cohort(tiny_cohort_spec(6, 43), holdout.path());

  StudyConfig config;
  config.input_dir = data.path();
  config.holdout_dir = holdout.path();
  config.seed = 3;
  config.k_folds = 4;
  config.threads = 2;
  config.selection.rfe.forest.n_trees = 8;
  config.selection.rfe.folds = 3;
  config.selection.rfe.sizes = {2};
  config.forest.n_trees = 10;

  TempDir out("study_hd_out");
  config.output_dir = out.path();
  const nlohmann::json report = run_study(config);
  CHECK(report.at("n_holdout").get<std::size_t>() == 6);
  for (const char* model : {"baseline", "radiomics", "invasiveness"}) {
    REQUIRE(report.at("models").at(model).contains("holdout"));
    CHECK(report.at("models").at(model).at("holdout").at("n").get<int>() == 6);
  }
  CHECK(study_report_text(report).find("Holdout") != std::string::npos);
}

TEST_CASE("study config json round-trip honors flags") {
  const nlohmann::json j = {
      {"input_dir", "/x"},   {"output_dir", "/y"},
      {"seed", 5},           {"k_folds", 7},
      {"gtr_only", false},   {"thresholds", {{"t_low", 250.0}, {"t_high", 420.0}}},
      {"svr", {{"epsilon", 25.0}}}};
  const StudyConfig c = study_config_from_json(j);
  CHECK(c.input_dir == "/x");
  CHECK(c.k_folds == 7);
  CHECK_FALSE(c.gtr_only);
  CHECK(c.thresholds.t_low == 250.0);
  CHECK(c.svr.epsilon == 25.0);

  CHECK_THROWS_AS(study_config_from_json(nlohmann::json{{"input_dir", "/x"}}),
                  Error);
}

TEST_SUITE_END();
