// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace gliomics {

enum class SvrKernel { rbf, linear };

struct SvrParams {
  SvrKernel kernel = SvrKernel::rbf;
  double gamma = 0.0;     // 0 -> 1 / (p * var(X_standardized))
  double c = 100.0;
  double epsilon = 30.0;  // days
  double tol = 1e-6;      // maximum KKT violation at convergence
  long max_updates = 10000000;
};

// epsilon-SVR trained on internally standardized inputs. dual_coefficients
// holds beta_i = alpha_i - alpha_i* for the support vectors only.
struct SvrModel {
  SvrParams params;
  double gamma = 0.0;            // resolved value
  std::vector<double> mean, sd;  // per-predictor standardization stats
  std::vector<std::vector<double>> support_vectors;  // standardized rows
  std::vector<double> dual_coefficients;
  double bias = 0.0;  // days
  double kkt_violation = 0.0;
  long updates = 0;
};

// Solves the epsilon-SVR dual by sequential two-coordinate (SMO) updates
// until the maximum KKT violation drops below params.tol.
SvrModel fit_svr(const Matrix& x, std::span<const double> y,
                 const SvrParams& params = {});

double predict_row(const SvrModel& model, std::span<const double> row);
std::vector<double> predict(const SvrModel& model, const Matrix& x);

// Dual objective value 0.5 b^T K b + eps*sum|b| - y^T b for a full dual
// vector over the training set; used to compare against independent QP
// solutions.
double svr_dual_objective(const Matrix& x_standardized,
                          std::span<const double> y,
                          std::span<const double> beta, SvrKernel kernel,
                          double gamma, double epsilon);

// Full dual vector (one beta per training point, zeros included) as solved
// on the standardized inputs; exposed for optimality checks.
struct SvrFitDetail {
  SvrModel model;
  std::vector<double> beta;           // length n
  Matrix x_standardized;              // n x p
};
SvrFitDetail fit_svr_detailed(const Matrix& x, std::span<const double> y,
                              const SvrParams& params = {});

}  // namespace gliomics
