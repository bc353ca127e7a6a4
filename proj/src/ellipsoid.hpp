// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "geometry.hpp"
#include "volume.hpp"

namespace gliomics {

// {x : (x - center)^T shape (x - center) <= 1}
struct Ellipsoid {
  Vec3 center{};
  std::array<double, 3> semi_axes{};  // descending, mm
  Mat3 orientation;                   // columns are axis directions
  Mat3 shape;                         // symmetric positive definite

  double volume() const;
  // (p - c)^T A (p - c); <= 1 means inside.
  double quadratic(const Vec3& p) const;
};

struct MveParams {
  double tolerance = 1e-3;    // stop when max M_i - (d+1) <= tolerance
  int max_iterations = 100000;
};

// Khachiyan's first-order minimum volume enclosing ellipsoid. Requires at
// least 4 affinely independent points.
Ellipsoid min_volume_ellipsoid(std::span<const Vec3> points,
                               const MveParams& params = {});

struct RicValue {
  double ric = 0.0;  // tc second semi-axis / wt second semi-axis
  Ellipsoid wt_ellipsoid;
  Ellipsoid tc_ellipsoid;
};

// Fits the MVE to the boundary voxel centers of the WT and TC masks and
// takes the ratio of second semi-axis lengths.
RicValue relative_invasiveness(const LabelVolume& vol,
                               const MveParams& params = {});

}  // namespace gliomics
