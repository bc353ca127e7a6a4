// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace gliomics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kernel_value(SvrKernel kernel, double gamma, std::span<const double> a,
                    std::span<const double> b) {
  if (kernel == SvrKernel::linear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

struct Standardized {
  Matrix x;
  std::vector<double> mean, sd;
};

Standardized standardize(const Matrix& x) {
  Standardized s;
  s.x = Matrix(x.rows, x.cols);
  s.mean.assign(x.cols, 0.0);
  s.sd.assign(x.cols, 1.0);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) sum += x.at(r, c);
    const double mean = sum / static_cast<double>(x.rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double d = x.at(r, c) - mean;
      ss += d * d;
    }
    const double var = ss / static_cast<double>(x.rows);
    const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
    s.mean[c] = mean;
    s.sd[c] = sd;
    for (std::size_t r = 0; r < x.rows; ++r)
      s.x.at(r, c) = (x.at(r, c) - mean) / sd;
  }
  return s;
}

double resolve_gamma(const SvrParams& params, const Matrix& x_std) {
  if (params.gamma > 0.0) return params.gamma;
  // 1 / (p * var(X)) on the standardized inputs.
  double sum = 0.0;
  for (double v : x_std.data) sum += v;
  const double mean = sum / static_cast<double>(x_std.data.size());
  double ss = 0.0;
  for (double v : x_std.data) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(x_std.data.size());
  if (var <= 0.0) return 1.0;
  return 1.0 / (static_cast<double>(x_std.cols) * var);
}

// Feasible-bias interval of one training point given its dual coefficient.
// The KKT conditions hold for bias b iff lo <= b <= hi for every point.
struct BiasBounds {
  double lo, hi;
};

BiasBounds bias_bounds(double beta, double r, double c, double epsilon) {
  if (beta == 0.0) return {r - epsilon, r + epsilon};
  if (beta >= c) return {-kInf, r - epsilon};
  if (beta <= -c) return {r + epsilon, kInf};
  if (beta > 0.0) return {r - epsilon, r - epsilon};
  return {r + epsilon, r + epsilon};
}

}  // namespace

double svr_dual_objective(const Matrix& x_standardized,
                          std::span<const double> y,
                          std::span<const double> beta, SvrKernel kernel,
                          double gamma, double epsilon) {
  const std::size_t n = x_standardized.rows;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (beta[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (beta[j] == 0.0) continue;
      quad += beta[i] * beta[j] *
              kernel_value(kernel, gamma, x_standardized.row(i),
                           x_standardized.row(j));
    }
  }
  double linear = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    linear += epsilon * std::abs(beta[i]) - y[i] * beta[i];
  return 0.5 * quad + linear;
}

SvrFitDetail fit_svr_detailed(const Matrix& x, std::span<const double> y,
                              const SvrParams& params) {
  const std::size_t n = x.rows;
  if (y.size() != n) fail(ErrorKind::shape, "fit_svr: X rows != y length");
  if (n < 2) fail(ErrorKind::validation, "fit_svr: need at least 2 samples");
  if (params.c <= 0.0 || params.epsilon < 0.0)
    fail(ErrorKind::config, "fit_svr: C must be > 0 and epsilon >= 0");

  Standardized std_x = standardize(x);
  const double gamma = resolve_gamma(params, std_x.x);
  const double c = params.c;
  const double eps = params.epsilon;

  // Dense kernel matrix.
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel_value(params.kernel, gamma, std_x.x.row(i),
                                    std_x.x.row(j));
      k.at(i, j) = v;
      k.at(j, i) = v;
    }

  std::vector<double> beta(n, 0.0);
  std::vector<double> f(n, 0.0);  // K beta
  double bias = 0.0;
  double violation = 0.0;
  long updates = 0;
  bool converged = false;

  for (; updates < params.max_updates; ++updates) {
    // Most violating pair: the point demanding the largest bias against the
    // point demanding the smallest.
    double max_lo = -kInf, min_hi = kInf;
    std::size_t i_up = 0, i_dn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto [lo, hi] = bias_bounds(beta[i], y[i] - f[i], c, eps);
      if (lo > max_lo) {
        max_lo = lo;
        i_up = i;
      }
      if (hi < min_hi) {
        min_hi = hi;
        i_dn = i;
      }
    }

    violation = std::max(0.0, 0.5 * (max_lo - min_hi));
    if (max_lo - min_hi <= 2.0 * params.tol) {
      bias = 0.5 * (max_lo + min_hi);
      converged = true;
      break;
    }

    // Two-coordinate step: raise beta[i_up], lower beta[i_dn], preserving
    // sum(beta) = 0. Clamp at the box and at the |beta| kinks (where the
    // subgradient of the epsilon term changes).
    const std::size_t i = i_up, j = i_dn;
    const double eta = k.at(i, i) + k.at(j, j) - 2.0 * k.at(i, j);
    double delta = eta > 1e-12 ? (max_lo - min_hi) / eta : kInf;
    delta = std::min(delta, c - beta[i]);
    delta = std::min(delta, c + beta[j]);
    if (beta[i] < 0.0) delta = std::min(delta, -beta[i]);
    if (beta[j] > 0.0) delta = std::min(delta, beta[j]);
    if (!(delta > 0.0)) {
      // No movable direction left; report the residual violation.
      break;
    }

    beta[i] += delta;
    beta[j] -= delta;
    if (std::abs(beta[i] - c) < 1e-12 * c) beta[i] = c;
    if (std::abs(beta[j] + c) < 1e-12 * c) beta[j] = -c;

    for (std::size_t t = 0; t < n; ++t)
      f[t] += delta * (k.at(t, i) - k.at(t, j));

    // Periodic exact refresh against incremental drift.
    if ((updates & 0x3fff) == 0x3fff) {
      for (std::size_t t = 0; t < n; ++t) {
        double s = 0.0;
        for (std::size_t u = 0; u < n; ++u) s += k.at(t, u) * beta[u];
        f[t] = s;
      }
    }
  }

  if (!converged) {
    std::ostringstream os;
    os << "SVR solver did not converge after " << updates
       << " updates (KKT violation " << violation << ", tolerance "
       << params.tol << ")";
    fail(ErrorKind::iteration_limit, os.str());
  }

  SvrFitDetail detail;
  detail.beta = beta;
  detail.x_standardized = std_x.x;

  SvrModel& model = detail.model;
  model.params = params;
  model.gamma = gamma;
  model.mean = std::move(std_x.mean);
  model.sd = std::move(std_x.sd);
  model.bias = bias;
  model.kkt_violation = violation;
  model.updates = updates;
  for (std::size_t i = 0; i < n; ++i) {
    if (beta[i] == 0.0) continue;
    model.dual_coefficients.push_back(beta[i]);
    std::vector<double> row(detail.x_standardized.row(i).begin(),
                            detail.x_standardized.row(i).end());
    model.support_vectors.push_back(std::move(row));
  }
  return detail;
}

SvrModel fit_svr(const Matrix& x, std::span<const double> y,
                 const SvrParams& params) {
  return fit_svr_detailed(x, y, params).model;
}

double predict_row(const SvrModel& model, std::span<const double> row) {
  if (row.size() != model.mean.size())
    fail(ErrorKind::shape, "svr predict: wrong number of predictors");
  std::vector<double> z(row.size());
  for (std::size_t c = 0; c < row.size(); ++c)
    z[c] = (row[c] - model.mean[c]) / model.sd[c];
  double value = model.bias;
  for (std::size_t s = 0; s < model.support_vectors.size(); ++s)
    value += model.dual_coefficients[s] *
             kernel_value(model.params.kernel, model.gamma,
                          model.support_vectors[s], z);
  return value;
}

std::vector<double> predict(const SvrModel& model, const Matrix& x) {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict_row(model, x.row(r));
  return out;
}

}  // namespace gliomics
