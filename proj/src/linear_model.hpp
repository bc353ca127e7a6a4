// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "matrix.hpp"

namespace gliomics {

struct LinearModel {
  double intercept = 0.0;       // days
  std::vector<double> slopes;   // days per predictor unit
};

// Ordinary least squares via the normal equations. Throws a degenerate
// error on a rank-deficient design.
LinearModel fit_linear(const Matrix& x, std::span<const double> y);

double predict_row(const LinearModel& model, std::span<const double> row);
std::vector<double> predict(const LinearModel& model, const Matrix& x);

}  // namespace gliomics
