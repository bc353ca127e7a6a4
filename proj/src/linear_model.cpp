// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "linear_model.hpp"

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace gliomics {

LinearModel fit_linear(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows;
  const std::size_t p = x.cols + 1;  // with intercept column
  if (y.size() != n)
    fail(ErrorKind::shape, "fit_linear: X rows != y length");
  if (n <= x.cols)
    fail(ErrorKind::degenerate, "fit_linear: need more samples than predictors");

  // Normal equations A beta = b with an implicit leading 1s column.
  std::vector<std::vector<double>> a(p, std::vector<double>(p, 0.0));
  std::vector<double> b(p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(p);
    row[0] = 1.0;
    for (std::size_t c = 0; c < x.cols; ++c) row[c + 1] = x.at(r, c);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += row[i] * row[j];
      b[i] += row[i] * y[r];
    }
  }

  // Scale-aware pivot threshold for rank detection.
  double diag_max = 0.0;
  for (std::size_t i = 0; i < p; ++i) diag_max = std::max(diag_max, a[i][i]);
  const double pivot_tol = diag_max * 1e-12;

  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) <= pivot_tol)
      fail(ErrorKind::degenerate, "fit_linear: singular design matrix");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    const double inv = 1.0 / a[col][col];
    for (std::size_t c = col; c < p; ++c) a[col][c] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < p; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }

  LinearModel model;
  model.intercept = b[0];
  model.slopes.assign(b.begin() + 1, b.end());
  return model;
}

double predict_row(const LinearModel& model, std::span<const double> row) {
  if (row.size() != model.slopes.size())
    fail(ErrorKind::shape, "linear predict: wrong number of predictors");
  double v = model.intercept;
  for (std::size_t c = 0; c < row.size(); ++c) v += model.slopes[c] * row[c];
  return v;
}

std::vector<double> predict(const LinearModel& model, const Matrix& x) {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict_row(model, x.row(r));
  return out;
}

}  // namespace gliomics
