// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace gliomics {

double Ellipsoid::volume() const {
  return 4.0 / 3.0 * std::numbers::pi * semi_axes[0] * semi_axes[1] *
         semi_axes[2];
}

double Ellipsoid::quadratic(const Vec3& p) const {
  const Vec3 d = p - center;
  return d.dot(shape.apply(d));
}

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

Ellipsoid ellipsoid_from_shape(const Vec3& center, const Mat3& shape) {
  Ellipsoid e;
  e.center = center;
  e.shape = shape;
  const SymEigen3 eig = sym_eigen(shape);
  // Eigenvalues of A descending => semi-axes 1/sqrt(lambda) ascending, so
  // reverse to keep semi_axes sorted descending.
  for (std::size_t i = 0; i < 3; ++i) {
    const double lambda = eig.values[2 - i];
    if (!(lambda > 0.0))
      fail(ErrorKind::degenerate,
           "ellipsoid shape matrix is not positive definite");
    e.semi_axes[i] = 1.0 / std::sqrt(lambda);
    for (std::size_t r = 0; r < 3; ++r)
      e.orientation.m[r][i] = eig.vectors.m[r][2 - i];
  }
  return e;
}

}  // namespace

Ellipsoid min_volume_ellipsoid(std::span<const Vec3> points,
                               const MveParams& params) {
  const std::size_t n = points.size();
  if (n < 4)
    fail(ErrorKind::degenerate,
         "minimum volume ellipsoid requires at least 4 points");

  std::vector<double> u(n, 1.0 / static_cast<double>(n));

  // X = sum_i u_i q_i q_i^T with q = (x, y, z, 1).
  auto accumulate_x = [&](const std::vector<double>& w) {
    Mat4 x{};
    for (std::size_t i = 0; i < n; ++i) {
      const double q[4] = {points[i].x, points[i].y, points[i].z, 1.0};
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) x[r][c] += w[i] * q[r] * q[c];
    }
    return x;
  };

  Mat4 x = accumulate_x(u);
  Mat4 x_inv;
  bool converged = false;
  double residual = 0.0;

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    if (!invert4(x, x_inv))
      fail(ErrorKind::degenerate,
           "degenerate point set (coplanar or collinear) in MVE fit");

    double max_m = -1.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double q[4] = {points[i].x, points[i].y, points[i].z, 1.0};
      double m = 0.0;
      for (std::size_t r = 0; r < 4; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < 4; ++c) row += x_inv[r][c] * q[c];
        m += q[r] * row;
      }
      if (m > max_m) {
        max_m = m;
        j = i;
      }
    }

    residual = max_m - 4.0;
    if (residual <= params.tolerance) {
      converged = true;
      break;
    }

    const double step = (max_m - 4.0) / (4.0 * (max_m - 1.0));
    for (double& w : u) w *= (1.0 - step);
    u[j] += step;

    // Rank-one update of X.
    const double q[4] = {points[j].x, points[j].y, points[j].z, 1.0};
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c)
        x[r][c] = (1.0 - step) * x[r][c] + step * q[r] * q[c];
  }

  if (!converged) {
    std::ostringstream os;
    os << "MVE did not converge within " << params.max_iterations
       << " iterations (residual " << residual << ", tolerance "
       << params.tolerance << ")";
    fail(ErrorKind::iteration_limit, os.str());
  }

  Vec3 center{};
  for (std::size_t i = 0; i < n; ++i) center += points[i] * u[i];

  Mat3 scatter{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = points[i];
    scatter.m[0][0] += u[i] * p.x * p.x;
    scatter.m[0][1] += u[i] * p.x * p.y;
    scatter.m[0][2] += u[i] * p.x * p.z;
    scatter.m[1][1] += u[i] * p.y * p.y;
    scatter.m[1][2] += u[i] * p.y * p.z;
    scatter.m[2][2] += u[i] * p.z * p.z;
  }
  scatter.m[1][0] = scatter.m[0][1];
  scatter.m[2][0] = scatter.m[0][2];
  scatter.m[2][1] = scatter.m[1][2];
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      scatter.m[r][c] -= center[r] * center[c];

  Mat3 scatter_inv;
  if (!invert3(scatter, scatter_inv))
    fail(ErrorKind::degenerate,
         "degenerate point set (coplanar or collinear) in MVE fit");
  Mat3 shape;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      shape.m[r][c] = scatter_inv.m[r][c] / 3.0;
  // Symmetrize against numerical drift.
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = r + 1; c < 3; ++c) {
      const double v = 0.5 * (shape.m[r][c] + shape.m[c][r]);
      shape.m[r][c] = v;
      shape.m[c][r] = v;
    }

  return ellipsoid_from_shape(center, shape);
}

RicValue relative_invasiveness(const LabelVolume& vol,
                               const MveParams& params) {
  const RoiMask wt = roi_mask(vol, Roi::WT);
  const RoiMask tc = roi_mask(vol, Roi::TC);

  const std::vector<Vec3> wt_pts = boundary_voxel_centers(wt);
  const std::vector<Vec3> tc_pts = boundary_voxel_centers(tc);
  if (wt_pts.size() < 4)
    fail(ErrorKind::degenerate, "RIC: WT has fewer than 4 boundary voxels");
  if (tc_pts.size() < 4)
    fail(ErrorKind::degenerate, "RIC: TC has fewer than 4 boundary voxels");

  RicValue out;
  out.wt_ellipsoid = min_volume_ellipsoid(wt_pts, params);
  out.tc_ellipsoid = min_volume_ellipsoid(tc_pts, params);
  out.ric = out.tc_ellipsoid.semi_axes[1] / out.wt_ellipsoid.semi_axes[1];
  return out;
}

}  // namespace gliomics
