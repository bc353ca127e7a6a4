// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "nifti.hpp"
#include "rng.hpp"
#include "text_io.hpp"

namespace gliomics {

LabelVolume make_phantom(const PhantomSpec& spec) {
  const VolumeGeometry& g = spec.geom;
  if (!(spec.ric > 0.0 && spec.ric <= 1.0))
    fail(ErrorKind::config, "phantom ric must be in (0, 1]");
  if (!(spec.wt_semiaxes[0] >= spec.wt_semiaxes[1] &&
        spec.wt_semiaxes[1] >= spec.wt_semiaxes[2] &&
        spec.wt_semiaxes[2] > 0.0))
    fail(ErrorKind::config, "phantom semi-axes must be descending and > 0");

  const Vec3 center =
      spec.centered
          ? Vec3{g.origin.x + 0.5 * (g.nx - 1) * g.sx,
                 g.origin.y + 0.5 * (g.ny - 1) * g.sy,
                 g.origin.z + 0.5 * (g.nz - 1) * g.sz}
          : spec.center;

  // Exact bounding box of the rotated ellipsoid: the support along axis i
  // is sqrt(sum_j (a_j R_ij)^2).
  const double lo[3] = {g.origin.x, g.origin.y, g.origin.z};
  const double hi[3] = {g.origin.x + (g.nx - 1) * g.sx,
                        g.origin.y + (g.ny - 1) * g.sy,
                        g.origin.z + (g.nz - 1) * g.sz};
  for (int axis = 0; axis < 3; ++axis) {
    double support = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double term = spec.wt_semiaxes[j] * spec.rotation.m[axis][j];
      support += term * term;
    }
    support = std::sqrt(support);
    if (center[axis] - support < lo[axis] || center[axis] + support > hi[axis])
      fail(ErrorKind::config, "phantom does not fit inside the volume bounds");
  }

  const Mat3 rot_t = spec.rotation.transpose();
  const double et_scale = std::pow(0.5, 1.0 / 3.0);  // half the TC volume

  auto radius2 = [&](const Vec3& local, double scale) {
    double sum = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double r = local[a] / (spec.wt_semiaxes[a] * scale);
      sum += r * r;
    }
    return sum;
  };

  LabelVolume vol(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 p = g.voxel_center(i, j, k) - center;
        const Vec3 local = rot_t.apply(p);
        if (radius2(local, 1.0) > 1.0) continue;  // outside WT
        if (radius2(local, spec.ric) > 1.0) {
          vol.at(i, j, k) = kLabelEdema;
        } else if (radius2(local, spec.ric * et_scale) > 1.0) {
          vol.at(i, j, k) = kLabelNecrosis;
        } else {
          vol.at(i, j, k) = kLabelEnhancing;
        }
      }
  return vol;
}

IntensityVolume make_t1gd_proxy(const LabelVolume& vol, std::uint64_t seed) {
  Rng rng(seed);
  IntensityVolume out(vol.geom);
  for (std::size_t v = 0; v < vol.data.size(); ++v) {
    double level = 0.1;  // background
    switch (vol.data[v]) {
      case kLabelEnhancing: level = 2.0; break;
      case kLabelNecrosis: level = 0.6; break;
      case kLabelEdema: level = 1.0; break;
      default: break;
    }
    out.data[v] = static_cast<float>(level + 0.05 * rng.normal());
  }
  return out;
}

SampledSubject sample_subject(const CohortSpec& spec, int index) {
  const Rng root(spec.seed);
  Rng rng = root.child(static_cast<std::uint64_t>(index));

  SampledSubject s;
  s.phantom.geom = spec.geom;
  double a1 = rng.uniform(spec.wt_a1_range[0], spec.wt_a1_range[1]);
  double a2 = rng.uniform(spec.wt_a2_range[0], spec.wt_a2_range[1]);
  double a3 = rng.uniform(spec.wt_a3_range[0], spec.wt_a3_range[1]);
  a2 = std::min(a2, a1);
  a3 = std::min(a3, a2);
  s.phantom.wt_semiaxes = {a1, a2, a3};
  s.phantom.ric = rng.uniform(spec.ric_range[0], spec.ric_range[1]);
  if (spec.rotate) {
    const double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double beta = rng.uniform(0.0, std::numbers::pi);
    const double gamma = rng.uniform(0.0, 2.0 * std::numbers::pi);
    s.phantom.rotation = rotation_zyx(alpha, beta, gamma);
  }

  s.row.age = rng.uniform(spec.age_range[0], spec.age_range[1]);
  const double noise = spec.noise_sd > 0.0 ? spec.noise_sd * rng.normal() : 0.0;
  s.row.survival_days = spec.beta0 + spec.beta_age * s.row.age +
                        spec.beta_ric * s.phantom.ric + noise;
  s.row.resection_status =
      rng.uniform() < spec.gtr_fraction ? "GTR" : "STR";
  s.row.true_ric = s.phantom.ric;

  int width = 3;
  for (int v = spec.n_subjects - 1; v >= 1000; v /= 10) ++width;
  std::ostringstream id;
  id << 'S';
  id.width(width);
  id.fill('0');
  id << index;
  s.row.id = id.str();
  return s;
}

CohortResult make_cohort(const CohortSpec& spec, const std::string& out_dir) {
  if (spec.n_subjects < 1)
    fail(ErrorKind::config, "cohort needs at least 1 subject");
  if (spec.noise_sd < 0.0)
    fail(ErrorKind::config, "cohort noise_sd must be >= 0");

  CohortResult result;
  for (int i = 0; i < spec.n_subjects; ++i) {
    SampledSubject s = sample_subject(spec, i);
    if (s.row.survival_days < 0.0) {
      result.warnings.push_back("subject " + s.row.id +
                                ": survival clamped to 0 days");
      s.row.survival_days = 0.0;
    }
    const LabelVolume vol = make_phantom(s.phantom);
    const std::string subject_dir = out_dir + "/" + s.row.id;
    write_volume(vol, subject_dir + "/seg.nii.gz");
    if (spec.write_t1gd) {
      const IntensityVolume t1gd =
          make_t1gd_proxy(vol, Rng(spec.seed)
                                   .child(static_cast<std::uint64_t>(i))
                                   .child(77)
                                   .seed());
      write_volume(t1gd, subject_dir + "/t1gd.nii.gz");
    }
    result.rows.push_back(std::move(s.row));
  }

  std::ostringstream csv;
  csv << "id,age,survival_days,resection_status,true_ric\n";
  for (const CohortRow& row : result.rows)
    csv << row.id << ',' << format_double(row.age) << ','
        << format_double(row.survival_days) << ',' << row.resection_status
        << ',' << format_double(row.true_ric) << '\n';
  write_text_file(out_dir + "/cohort.csv", csv.str());
  return result;
}

}  // namespace gliomics
