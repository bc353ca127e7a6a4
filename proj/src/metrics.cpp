// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace gliomics {

SurvivalClass classify_survival(double days,
                                const SurvivalThresholds& thresholds) {
  if (!(days >= 0.0))
    fail(ErrorKind::validation, "survival days must be >= 0");
  if (!(thresholds.t_low < thresholds.t_high))
    fail(ErrorKind::config, "survival thresholds must satisfy t_low < t_high");
  if (days < thresholds.t_low) return SurvivalClass::short_term;
  if (days > thresholds.t_high) return SurvivalClass::long_term;
  return SurvivalClass::intermediate;
}

const char* survival_class_name(SurvivalClass c) {
  switch (c) {
    case SurvivalClass::short_term: return "short";
    case SurvivalClass::intermediate: return "intermediate";
    case SurvivalClass::long_term: return "long";
  }
  return "?";
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Tied block [i, j]: average of 1-based ranks.
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson_correlation(std::span<const double> a,
                           std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size()) fail(ErrorKind::shape, "correlation: length mismatch");
  if (n < 2) fail(ErrorKind::validation, "correlation: need at least 2 values");
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va <= 0.0 || vb <= 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  const double r = cov / (std::sqrt(va) * std::sqrt(vb));
  return std::clamp(r, -1.0, 1.0);
}

double spearman_correlation(std::span<const double> a,
                            std::span<const double> b) {
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  return pearson_correlation(ra, rb);
}

EvalReport compute_metrics(std::span<const double> pred,
                           std::span<const double> truth,
                           const SurvivalThresholds& thresholds) {
  if (pred.size() != truth.size())
    fail(ErrorKind::shape, "metrics: prediction/truth length mismatch");
  if (pred.size() < 2)
    fail(ErrorKind::validation, "metrics: need at least 2 subjects");

  EvalReport report;
  report.n = pred.size();

  std::size_t correct = 0;
  std::vector<double> sq_errors(pred.size());
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    // Predictions may stray below zero; clamp for the class comparison only.
    const SurvivalClass pc = classify_survival(std::max(0.0, pred[i]), thresholds);
    const SurvivalClass tc = classify_survival(truth[i], thresholds);
    if (pc == tc) ++correct;
    const double d = pred[i] - truth[i];
    sq_errors[i] = d * d;
    sum_sq += d * d;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
  report.mse = sum_sq / static_cast<double>(pred.size());

  std::sort(sq_errors.begin(), sq_errors.end());
  const std::size_t m = sq_errors.size();
  report.mse_median = (m % 2 == 1)
                          ? sq_errors[m / 2]
                          : 0.5 * (sq_errors[m / 2 - 1] + sq_errors[m / 2]);

  const double rho = spearman_correlation(pred, truth);
  const double r = pearson_correlation(pred, truth);
  report.spearman_rho = rho;
  report.pearson_r = r;
  report.undefined_correlation = std::isnan(rho) || std::isnan(r);
  return report;
}

}  // namespace gliomics
