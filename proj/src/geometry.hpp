// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace gliomics {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](std::size_t i) const {
    return i == 0 ? x : (i == 1 ? y : z);
  }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }

  double& operator()(std::size_t r, std::size_t c) { return m[r][c]; }
  double operator()(std::size_t r, std::size_t c) const { return m[r][c]; }

  Vec3 apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  Mat3 transpose() const {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  Mat3 mul(const Mat3& o) const {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  double det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
};

// Rotation matrix from intrinsic Z-Y-X Euler angles (radians).
Mat3 rotation_zyx(double alpha, double beta, double gamma);

struct SymEigen3 {
  std::array<double, 3> values{};  // descending
  Mat3 vectors;                    // columns are unit eigenvectors
};

// Jacobi eigen decomposition of a symmetric 3x3 matrix. Eigenvalues are
// sorted descending; eigenvector signs are fixed deterministically.
SymEigen3 sym_eigen(const Mat3& a);

// In-place Gauss-Jordan inverse with partial pivoting.
// Returns false if the matrix is (numerically) singular.
bool invert3(const Mat3& a, Mat3& out);
bool invert4(const std::array<std::array<double, 4>, 4>& a,
             std::array<std::array<double, 4>, 4>& out);

}  // namespace gliomics
