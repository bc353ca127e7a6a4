// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "volume.hpp"

namespace gliomics {

// The 13 morphological features of a ROI: centroid offset against a brain
// reference (3 values) plus 10 shape descriptors.
struct MorphFeatures {
  Vec3 centroid_offset{};     // ROI centroid minus brain centroid, mm
  double volume = 0.0;        // mm^3
  double surface_area = 0.0;  // mm^2, exposed voxel faces
  double sav_ratio = 0.0;     // 1/mm
  double sphericity = 0.0;
  double max_diameter_3d = 0.0;  // mm, over boundary voxel centers
  double major_axis = 0.0;       // 4*sqrt(largest covariance eigenvalue), mm
  double minor_axis = 0.0;
  double least_axis = 0.0;
  double elongation = 0.0;  // sqrt(lambda_minor / lambda_major)
  double flatness = 0.0;    // sqrt(lambda_least / lambda_major)
  bool degenerate = false;  // single voxel (or zero covariance)

  std::array<double, 13> as_array() const;
  static const std::array<std::string, 13>& names();  // without ROI prefix
};

// Centroid of the nonzero voxels of a brain mask; without a mask, the
// geometric center of the volume extent.
Vec3 brain_centroid(const VolumeGeometry& geom, const RoiMask* brain_mask);

MorphFeatures morphology(const RoiMask& roi, const Vec3& brain_ref);
MorphFeatures morphology(const LabelVolume& vol, Roi kind,
                         const RoiMask* brain_mask = nullptr);

}  // namespace gliomics
