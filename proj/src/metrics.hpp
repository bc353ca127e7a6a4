// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gliomics {

enum class SurvivalClass { short_term, intermediate, long_term };

struct SurvivalThresholds {
  double t_low = 300.0;   // days; 10 months at 30 days/month
  double t_high = 450.0;  // 15 months
};

// days < t_low -> short, days > t_high -> long, otherwise intermediate
// (boundary values are intermediate). Negative days are rejected.
SurvivalClass classify_survival(double days,
                                const SurvivalThresholds& thresholds = {});

const char* survival_class_name(SurvivalClass c);

struct EvalReport {
  std::size_t n = 0;
  double accuracy = 0.0;      // 3-class survival accuracy
  double mse = 0.0;           // days^2
  double mse_median = 0.0;    // median squared error, days^2
  double spearman_rho = 0.0;
  double pearson_r = 0.0;
  bool undefined_correlation = false;  // zero-variance input
  std::vector<EvalReport> per_fold;
};

EvalReport compute_metrics(std::span<const double> pred,
                           std::span<const double> truth,
                           const SurvivalThresholds& thresholds = {});

// Average ranks (1-based, ties averaged).
std::vector<double> average_ranks(std::span<const double> values);

// NaN with undefined flag semantics are handled by compute_metrics; these
// return NaN on zero variance.
double pearson_correlation(std::span<const double> a, std::span<const double> b);
double spearman_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace gliomics
