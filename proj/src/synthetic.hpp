// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "volume.hpp"

namespace gliomics {

// Nested-ellipsoid tumor phantom: WT ellipsoid with edema between the WT and
// TC surfaces, the TC being the WT scaled by `ric`, and the enhancing label
// filling the inner half (by volume) of the TC.
struct PhantomSpec {
  std::array<double, 3> wt_semiaxes = {20.0, 10.0, 5.0};  // mm, descending
  double ric = 0.5;                                       // in (0, 1]
  VolumeGeometry geom = {64, 64, 64, 1.0, 1.0, 1.0, {}};
  bool centered = true;  // place at the volume center
  Vec3 center{};         // used when centered == false
  Mat3 rotation = Mat3::identity();
};

LabelVolume make_phantom(const PhantomSpec& spec);

// Two-level T1Gd stand-in: bright enhancing rim, dimmer interior, plus
// seeded Gaussian noise. Enough to exercise the intensity filter.
IntensityVolume make_t1gd_proxy(const LabelVolume& vol, std::uint64_t seed);

struct CohortSpec {
  int n_subjects = 100;
  VolumeGeometry geom = {48, 48, 48, 1.0, 1.0, 1.0, {}};
  std::array<double, 2> wt_a1_range = {12.0, 18.0};  // mm
  std::array<double, 2> wt_a2_range = {9.0, 14.0};
  std::array<double, 2> wt_a3_range = {6.0, 10.0};
  std::array<double, 2> ric_range = {0.35, 0.95};
  std::array<double, 2> age_range = {30.0, 75.0};
  // survival_days = beta0 + beta_age*age + beta_ric*ric + N(0, noise_sd^2)
  double beta0 = 900.0;
  double beta_age = -4.0;
  double beta_ric = -300.0;
  double noise_sd = 50.0;
  double gtr_fraction = 1.0;
  bool rotate = true;
  bool write_t1gd = false;
  std::uint64_t seed = 0;
};

struct CohortRow {
  std::string id;
  double age = 0.0;
  double survival_days = 0.0;
  std::string resection_status;
  double true_ric = 0.0;
};

struct CohortResult {
  std::vector<CohortRow> rows;
  std::vector<std::string> warnings;
};

// Deterministic from the seed: writes <out_dir>/<id>/seg.nii.gz (plus
// t1gd.nii.gz when requested) and <out_dir>/cohort.csv.
CohortResult make_cohort(const CohortSpec& spec, const std::string& out_dir);

// The in-memory sampling step of make_cohort, exposed for tests.
struct SampledSubject {
  PhantomSpec phantom;
  CohortRow row;
};
SampledSubject sample_subject(const CohortSpec& spec, int index);

}  // namespace gliomics
