// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "morphology.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace gliomics {

std::array<double, 13> MorphFeatures::as_array() const {
  return {centroid_offset.x, centroid_offset.y, centroid_offset.z,
          volume,          surface_area,      sav_ratio,
          sphericity,      max_diameter_3d,   major_axis,
          minor_axis,      least_axis,        elongation,
          flatness};
}

const std::array<std::string, 13>& MorphFeatures::names() {
  static const std::array<std::string, 13> kNames = {
      "shape_center_X",         "shape_center_Y",
      "shape_center_Z",         "shape_Volume",
      "shape_SurfaceArea",      "shape_SurfaceVolumeRatio",
      "shape_Sphericity",       "shape_Maximum3DDiameter",
      "shape_MajorAxisLength",  "shape_MinorAxisLength",
      "shape_LeastAxisLength",  "shape_Elongation",
      "shape_Flatness"};
  return kNames;
}

Vec3 brain_centroid(const VolumeGeometry& geom, const RoiMask* brain_mask) {
  if (brain_mask) {
    if (!brain_mask->geom.same_grid(geom))
      fail(ErrorKind::shape, "brain mask geometry does not match volume");
    Vec3 sum{};
    std::size_t n = 0;
    const auto& g = brain_mask->geom;
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          if (brain_mask->at(i, j, k)) {
            sum += g.voxel_center(i, j, k);
            ++n;
          }
    if (n > 0) return sum * (1.0 / static_cast<double>(n));
  }
  // Geometric center of the volume extent.
  return {geom.origin.x + 0.5 * (geom.nx - 1) * geom.sx,
          geom.origin.y + 0.5 * (geom.ny - 1) * geom.sy,
          geom.origin.z + 0.5 * (geom.nz - 1) * geom.sz};
}

MorphFeatures morphology(const RoiMask& roi, const Vec3& brain_ref) {
  const auto& g = roi.geom;
  const std::size_t n = roi.count();
  if (n == 0)
    fail(ErrorKind::empty_roi,
         std::string("morphology: empty ROI ") + roi_name(roi.kind));

  MorphFeatures f;

  // Centroid and volume.
  Vec3 centroid{};
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (roi.at(i, j, k)) centroid += g.voxel_center(i, j, k);
  centroid = centroid * (1.0 / static_cast<double>(n));
  f.centroid_offset = centroid - brain_ref;
  f.volume = static_cast<double>(n) * g.voxel_volume();

  // Exposed-face surface area. An x-face has area sy*sz and so on.
  const double face_area[3] = {g.sy * g.sz, g.sx * g.sz, g.sx * g.sy};
  static constexpr std::array<std::array<int, 3>, 6> kFaces = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  double area = 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!roi.at(i, j, k)) continue;
        for (std::size_t face = 0; face < 6; ++face) {
          const auto& d = kFaces[face];
          const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
          if (!g.contains(ni, nj, nk) || !roi.at(ni, nj, nk))
            area += face_area[face / 2];
        }
      }
  f.surface_area = area;
  f.sav_ratio = area / f.volume;
  f.sphericity = std::cbrt(std::numbers::pi) *
                 std::pow(6.0 * f.volume, 2.0 / 3.0) / area;

  // Maximal 3D diameter over boundary voxel centers (exact: interior voxels
  // can never realize the maximum).
  const std::vector<Vec3> boundary = boundary_voxel_centers(roi);
  double max_d2 = 0.0;
  for (std::size_t a = 0; a < boundary.size(); ++a)
    for (std::size_t b = a + 1; b < boundary.size(); ++b) {
      const Vec3 d = boundary[a] - boundary[b];
      const double d2 = d.dot(d);
      if (d2 > max_d2) max_d2 = d2;
    }
  f.max_diameter_3d = std::sqrt(max_d2);

  // Axis lengths from the covariance of voxel centers (uniform weights).
  Mat3 cov{};
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!roi.at(i, j, k)) continue;
        const Vec3 d = g.voxel_center(i, j, k) - centroid;
        cov.m[0][0] += d.x * d.x;
        cov.m[0][1] += d.x * d.y;
        cov.m[0][2] += d.x * d.z;
        cov.m[1][1] += d.y * d.y;
        cov.m[1][2] += d.y * d.z;
        cov.m[2][2] += d.z * d.z;
      }
  const double inv_n = 1.0 / static_cast<double>(n);
  cov.m[0][0] *= inv_n;
  cov.m[0][1] *= inv_n;
  cov.m[0][2] *= inv_n;
  cov.m[1][1] *= inv_n;
  cov.m[1][2] *= inv_n;
  cov.m[2][2] *= inv_n;
  cov.m[1][0] = cov.m[0][1];
  cov.m[2][0] = cov.m[0][2];
  cov.m[2][1] = cov.m[1][2];

  const SymEigen3 eig = sym_eigen(cov);
  const double l1 = std::max(0.0, eig.values[0]);
  const double l2 = std::max(0.0, eig.values[1]);
  const double l3 = std::max(0.0, eig.values[2]);
  if (l1 <= 0.0) {
    f.degenerate = true;  // single voxel: no spatial extent
  } else {
    f.major_axis = 4.0 * std::sqrt(l1);
    f.minor_axis = 4.0 * std::sqrt(l2);
    f.least_axis = 4.0 * std::sqrt(l3);
    f.elongation = std::sqrt(l2 / l1);
    f.flatness = std::sqrt(l3 / l1);
  }
  return f;
}

MorphFeatures morphology(const LabelVolume& vol, Roi kind,
                         const RoiMask* brain_mask) {
  const RoiMask roi = roi_mask(vol, kind);
  return morphology(roi, brain_centroid(vol.geom, brain_mask));
}

}  // namespace gliomics
