// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <filesystem>

#include "doctest.h"
#include "ellipsoid.hpp"
#include "errors.hpp"
#include "nifti.hpp"
#include "test_support.hpp"
#include "text_io.hpp"

using namespace gliomics;
using gliomics::testing::TempDir;

TEST_SUITE_BEGIN("synthetic");

TEST_CASE("ric_target 1 produces no edema") {
  PhantomSpec spec;
  spec.wt_semiaxes = {10, 8, 6};
  spec.ric = 1.0;
  spec.geom = testing::cube_geom(32);
  const LabelVolume vol = make_phantom(spec);
  CHECK(roi_mask(vol, Roi::ED).count() == 0);
  CHECK(roi_mask(vol, Roi::ET).count() > 0);
  CHECK(roi_mask(vol, Roi::TC).count() == roi_mask(vol, Roi::WT).count());
}

TEST_CASE("rotated phantom recovers its RIC") {
  PhantomSpec spec;
  spec.wt_semiaxes = {16, 11, 8};
  spec.ric = 0.55;
  spec.geom = testing::cube_geom(48);
  spec.rotation = rotation_zyx(0.9, 0.4, -1.2);
  const LabelVolume vol = make_phantom(spec);
  validate_labels(vol);
  const RicValue value = relative_invasiveness(vol);
  CHECK(std::abs(value.ric - 0.55) < 0.05);
}

TEST_CASE("phantoms satisfy the mask hierarchy") {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    PhantomSpec spec;
    spec.wt_semiaxes = {rng.uniform(9, 14), rng.uniform(7, 9), rng.uniform(5, 7)};
    spec.ric = rng.uniform(0.4, 1.0);
    spec.geom = testing::cube_geom(36);
    spec.rotation = rotation_zyx(rng.uniform(0, 6.28), rng.uniform(0, 3.14),
                                 rng.uniform(0, 6.28));
    const LabelVolume vol = make_phantom(spec);
    validate_labels(vol);
    const RoiMask wt = roi_mask(vol, Roi::WT);
    const RoiMask tc = roi_mask(vol, Roi::TC);
    const RoiMask et = roi_mask(vol, Roi::ET);
    for (std::size_t i = 0; i < vol.data.size(); ++i) {
      if (et.data[i]) CHECK(tc.data[i]);
      if (tc.data[i]) CHECK(wt.data[i]);
    }
    CHECK(et.count() > 0);
  }
}

TEST_CASE("oversized phantoms are rejected") {
  PhantomSpec spec;
  spec.wt_semiaxes = {30, 20, 10};
  spec.geom = testing::cube_geom(32);  // 30 mm semi-axis cannot fit
  CHECK_THROWS_AS(make_phantom(spec), Error);
}

TEST_CASE("noise-free survival law is exact") {
  CohortSpec spec;
  spec.n_subjects = 3;
  spec.geom = testing::cube_geom(40);
  spec.age_range = {60, 60};
  spec.ric_range = {0.5, 0.5};
  spec.noise_sd = 0.0;
  spec.seed = 5;
  TempDir dir("cohort_law");
  const CohortResult result = make_cohort(spec, dir.path());
  for (const CohortRow& row : result.rows) {
    // 900 - 4*60 - 300*0.5 = 510
    CHECK(row.survival_days == doctest::Approx(510.0).epsilon(1e-12));
    CHECK(row.true_ric == 0.5);
    CHECK(row.age == 60.0);
  }
}

TEST_CASE("cohorts regenerate byte-identically from the same seed") {
  CohortSpec spec;
  spec.n_subjects = 3;
  spec.geom = testing::cube_geom(32);
  spec.wt_a1_range = {8, 11};
  spec.wt_a2_range = {6, 8};
  spec.wt_a3_range = {5, 6};
  spec.seed = 77;
  spec.write_t1gd = true;

  TempDir a("cohort_a"), b("cohort_b");
  make_cohort(spec, a.path());
  make_cohort(spec, b.path());

  namespace fs = std::filesystem;
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const std::string rel =
        fs::relative(entry.path(), a.path()).string();
    CHECK(read_text_file(entry.path().string()) ==
          read_text_file(b.path() + "/" + rel));
    ++files;
  }
  CHECK(files == 3 * 2 + 1);  // seg + t1gd per subject + cohort.csv
}

TEST_CASE("cohort csv carries the metadata columns") {
  CohortSpec spec;
  spec.n_subjects = 4;
  spec.geom = testing::cube_geom(32);
  spec.wt_a1_range = {8, 10};
  spec.wt_a2_range = {6, 8};
  spec.wt_a3_range = {5, 6};
  spec.gtr_fraction = 0.5;
  spec.seed = 11;
  TempDir dir("cohort_csv");
  make_cohort(spec, dir.path());

  const std::string csv = read_text_file(dir.file("cohort.csv"));
  CHECK(csv.find("id,age,survival_days,resection_status,true_ric") !=
        std::string::npos);
  CHECK(csv.find("S000") != std::string::npos);
  CHECK(std::filesystem::exists(dir.file("S000/seg.nii.gz")));

  const LabelVolume vol = read_label_volume(dir.file("S000/seg.nii.gz"));
  validate_labels(vol);
  CHECK(roi_mask(vol, Roi::WT).count() > 0);
}

TEST_CASE("generated RIC survives the full measurement pipeline") {
  CohortSpec spec;
  spec.n_subjects = 4;
  spec.geom = testing::cube_geom(48);
  spec.ric_range = {0.45, 0.9};
  spec.seed = 21;
  TempDir dir("cohort_ric");
  const CohortResult result = make_cohort(spec, dir.path());
  for (const CohortRow& row : result.rows) {
    const LabelVolume vol =
        read_label_volume(dir.file(row.id + "/seg.nii.gz"));
    const RicValue measured = relative_invasiveness(vol);
    CHECK(std::abs(measured.ric - row.true_ric) < 0.05);
  }
}

TEST_SUITE_END();
