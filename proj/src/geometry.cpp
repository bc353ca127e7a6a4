// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gliomics {

Mat3 rotation_zyx(double alpha, double beta, double gamma) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  Mat3 r;
  r.m[0] = {ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg};
  r.m[1] = {sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg};
  r.m[2] = {-sb, cb * sg, cb * cg};
  return r;
}

SymEigen3 sym_eigen(const Mat3& input) {
  Mat3 a = input;
  Mat3 v = Mat3::identity();

  auto off_diag_sq = [&]() {
    return a.m[0][1] * a.m[0][1] + a.m[0][2] * a.m[0][2] +
           a.m[1][2] * a.m[1][2];
  };

  for (int sweep = 0; sweep < 64 && off_diag_sq() > 1e-30; ++sweep) {
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        const double apq = a.m[p][q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a.m[q][q] - a.m[p][p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < 3; ++k) {
          const double akp = a.m[k][p];
          const double akq = a.m[k][q];
          a.m[k][p] = c * akp - s * akq;
          a.m[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double apk = a.m[p][k];
          const double aqk = a.m[q][k];
          a.m[p][k] = c * apk - s * aqk;
          a.m[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double vkp = v.m[k][p];
          const double vkq = v.m[k][q];
          v.m[k][p] = c * vkp - s * vkq;
          v.m[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a.m[i][i] > a.m[j][j]; });

  SymEigen3 out;
  for (std::size_t c = 0; c < 3; ++c) {
    const int src = order[c];
    out.values[c] = a.m[src][src];
    // Sign convention: largest-magnitude component nonnegative.
    std::size_t imax = 0;
    for (std::size_t r = 1; r < 3; ++r)
      if (std::abs(v.m[r][src]) > std::abs(v.m[imax][src])) imax = r;
    const double sign = v.m[imax][src] < 0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < 3; ++r) out.vectors.m[r][c] = sign * v.m[r][src];
  }
  return out;
}

namespace {

template <std::size_t N>
bool gauss_jordan(std::array<std::array<double, N>, N> a,
                  std::array<std::array<double, N>, N>& out) {
  std::array<std::array<double, N>, N> inv{};
  for (std::size_t i = 0; i < N; ++i) inv[i][i] = 1.0;

  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);

    const double scale = 1.0 / a[col][col];
    for (std::size_t c = 0; c < N; ++c) {
      a[col][c] *= scale;
      inv[col][c] *= scale;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < N; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  out = inv;
  return true;
}

}  // namespace

bool invert3(const Mat3& a, Mat3& out) {
  std::array<std::array<double, 3>, 3> tmp = a.m;
  std::array<std::array<double, 3>, 3> inv;
  if (!gauss_jordan<3>(tmp, inv)) return false;
  out.m = inv;
  return true;
}

bool invert4(const std::array<std::array<double, 4>, 4>& a,
             std::array<std::array<double, 4>, 4>& out) {
  return gauss_jordan<4>(a, out);
}

}  // namespace gliomics
