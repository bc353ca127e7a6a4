// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "ellipsoid.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "errors.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace gliomics;

TEST_SUITE_BEGIN("ellipsoid");

namespace {

std::vector<Vec3> ellipsoid_surface_points(const std::array<double, 3>& semi,
                                           int n_theta, int n_phi) {
  std::vector<Vec3> pts;
  for (int a = 0; a < n_theta; ++a)
    for (int b = 1; b < n_phi; ++b) {
      const double theta = 2.0 * std::numbers::pi * a / n_theta;
      const double phi = std::numbers::pi * b / n_phi - std::numbers::pi / 2.0;
      pts.push_back({semi[0] * std::cos(theta) * std::cos(phi),
                     semi[1] * std::sin(theta) * std::cos(phi),
                     semi[2] * std::sin(phi)});
    }
  pts.push_back({0, 0, semi[2]});
  pts.push_back({0, 0, -semi[2]});
  return pts;
}

}  // namespace

TEST_CASE("cube corners yield the circumscribed sphere") {
  std::vector<Vec3> corners;
  for (int s = 0; s < 8; ++s)
    corners.push_back({s & 1 ? 1.0 : -1.0, s & 2 ? 1.0 : -1.0,
                       s & 4 ? 1.0 : -1.0});
  const Ellipsoid e = min_volume_ellipsoid(corners);
  CHECK(e.center.norm() < 1e-3);
  for (double axis : e.semi_axes)
    CHECK(axis == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("surface-sampled ellipsoid recovers its semi-axes within 1%") {
  const std::array<double, 3> semi = {20.0, 10.0, 5.0};
  const std::vector<Vec3> pts = ellipsoid_surface_points(semi, 48, 24);
  const Ellipsoid e = min_volume_ellipsoid(pts);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(e.semi_axes[i] - semi[i]) / semi[i] < 0.01);
  CHECK(e.center.norm() < 0.1);
}

TEST_CASE("simplex vertices: support points sit on the boundary") {
  const std::vector<Vec3> pts = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  MveParams params;
  params.tolerance = 1e-6;
  const Ellipsoid e = min_volume_ellipsoid(pts, params);
  for (const Vec3& p : pts) {
    // All four points support the MVE of a simplex.
    CHECK(e.quadratic(p) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("containment holds on random point clouds") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> pts;
    const std::size_t n = 20 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back({rng.uniform(-10, 10), rng.uniform(-4, 4),
                     rng.uniform(-2, 2)});
    const Ellipsoid e = min_volume_ellipsoid(pts);
    for (const Vec3& p : pts) CHECK(e.quadratic(p) <= 1.0 + 1e-2);
  }
}

TEST_CASE("rigid motions move the ellipsoid without changing its axes") {
  Rng rng(29);
  std::vector<Vec3> pts;
  for (int i = 0; i < 60; ++i)
    pts.push_back({rng.uniform(-8, 8), rng.uniform(-3, 3), rng.uniform(-1, 1)});
  const Ellipsoid base = min_volume_ellipsoid(pts);

  const Mat3 rot = rotation_zyx(0.7, -0.3, 1.9);
  const Vec3 shift = {5.0, -2.0, 11.0};
  std::vector<Vec3> moved;
  for (const Vec3& p : pts) moved.push_back(rot.apply(p) + shift);
  const Ellipsoid e = min_volume_ellipsoid(moved);

  for (int i = 0; i < 3; ++i)
    CHECK(e.semi_axes[i] == doctest::Approx(base.semi_axes[i]).epsilon(1e-6));
  const Vec3 expected_center = rot.apply(base.center) + shift;
  CHECK((e.center - expected_center).norm() < 1e-6);
}

TEST_CASE("fitted volume beats random enclosing ellipsoids") {
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 50; ++i)
      pts.push_back({rng.uniform(-6, 6), rng.uniform(-3, 3),
                     rng.uniform(-1.5, 1.5)});
    const Ellipsoid fitted = min_volume_ellipsoid(pts);

    Vec3 centroid{};
    for (const Vec3& p : pts) centroid += p * (1.0 / pts.size());
    for (int r = 0; r < 20; ++r) {
      // Random SPD shape, scaled until it encloses every point.
      const Mat3 rot = rotation_zyx(rng.uniform(0, 6.28), rng.uniform(0, 3.14),
                                    rng.uniform(0, 6.28));
      Mat3 diag{};
      for (int d = 0; d < 3; ++d)
        diag.m[d][d] = 1.0 / std::pow(rng.uniform(1.0, 8.0), 2);
      const Mat3 shape0 = rot.mul(diag).mul(rot.transpose());
      double t = 0.0;
      for (const Vec3& p : pts) {
        const Vec3 d = p - centroid;
        t = std::max(t, d.dot(shape0.apply(d)));
      }
      Mat3 shape;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) shape.m[a][b] = shape0.m[a][b] / t;
      const SymEigen3 eig = sym_eigen(shape);
      double volume = 4.0 / 3.0 * std::numbers::pi;
      for (double lambda : eig.values) volume /= std::sqrt(lambda);
      CHECK(fitted.volume() <= volume * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("degenerate point sets are rejected") {
  std::vector<Vec3> few = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK_THROWS_AS(min_volume_ellipsoid(few), Error);

  std::vector<Vec3> coplanar;
  Rng rng(3);
  for (int i = 0; i < 30; ++i)
    coplanar.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5), 2.0});
  try {
    min_volume_ellipsoid(coplanar);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
}

TEST_CASE("exhausting the iteration budget reports the residual") {
  Rng rng(53);
  std::vector<Vec3> pts;
  for (int i = 0; i < 200; ++i)
    pts.push_back({rng.uniform(-9, 9), rng.uniform(-5, 5), rng.uniform(-2, 2)});
  MveParams params;
  params.tolerance = 1e-12;  // unreachable
  params.max_iterations = 3;
  try {
    min_volume_ellipsoid(pts, params);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::iteration_limit);
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("RIC is 1 when TC equals WT") {
  PhantomSpec spec;
  spec.wt_semiaxes = {12.0, 8.0, 6.0};
  spec.ric = 1.0;
  spec.geom = {40, 40, 40, 1, 1, 1, {}};
  const LabelVolume vol = make_phantom(spec);
  CHECK(roi_mask(vol, Roi::ED).count() == 0);
  const RicValue value = relative_invasiveness(vol);
  CHECK(value.ric == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nested phantom recovers RIC within 0.05") {
  PhantomSpec spec;
  spec.wt_semiaxes = {20.0, 10.0, 5.0};
  spec.ric = 0.5;
  spec.geom = {51, 31, 21, 1, 1, 1, {}};
  const RicValue value = relative_invasiveness(make_phantom(spec));
  CHECK(std::abs(value.ric - 0.5) < 0.05);
  CHECK(value.wt_ellipsoid.semi_axes[1] == doctest::Approx(10.0).epsilon(0.05));
  CHECK(value.tc_ellipsoid.semi_axes[1] == doctest::Approx(5.0).epsilon(0.08));
}

TEST_CASE("anisotropic spacing leaves RIC unchanged") {
  PhantomSpec spec;
  spec.wt_semiaxes = {20.0, 10.0, 5.0};
  spec.ric = 0.5;
  spec.geom = {51, 31, 13, 1.0, 1.0, 2.0, {}};  // same mm extents
  const RicValue value = relative_invasiveness(make_phantom(spec));
  CHECK(std::abs(value.ric - 0.5) < 0.05);
}

TEST_CASE("RIC is invariant under uniform coordinate scaling") {
  PhantomSpec spec;
  spec.wt_semiaxes = {14.0, 9.0, 6.0};
  spec.ric = 0.6;
  spec.geom = {40, 40, 40, 1, 1, 1, {}};
  const LabelVolume vol = make_phantom(spec);
  const double base = relative_invasiveness(vol).ric;

  LabelVolume scaled = vol;
  scaled.geom.sx = scaled.geom.sy = scaled.geom.sz = 3.0;
  const double after = relative_invasiveness(scaled).ric;
  CHECK(std::abs(after - base) < 1e-9);
}

TEST_CASE("ellipsoid invariants: sorted axes and orthonormal orientation") {
  Rng rng(71);
  std::vector<Vec3> pts;
  for (int i = 0; i < 40; ++i)
    pts.push_back({rng.uniform(-9, 9), rng.uniform(-5, 5), rng.uniform(-2, 2)});
  const Ellipsoid e = min_volume_ellipsoid(pts);
  CHECK(e.semi_axes[0] >= e.semi_axes[1]);
  CHECK(e.semi_axes[1] >= e.semi_axes[2]);
  CHECK(e.semi_axes[2] > 0.0);
  const Mat3 otr = e.orientation.transpose().mul(e.orientation);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(otr.m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
}

TEST_SUITE_END();
