// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "feature_table.hpp"
#include "random_forest.hpp"

namespace gliomics {

struct CorrelationPrune {
  struct Removal {
    std::string kept;
    std::string removed;
    double r;  // the offending correlation
  };
  std::vector<std::string> kept;
  std::vector<Removal> removed;
  std::vector<std::string> constant_features;  // retained but flagged
};

// Greedy pass over feature pairs with |Pearson r| > threshold; within each
// pair the feature with the larger mean absolute correlation to all others
// is dropped. Deterministic given feature order. Candidates default to all
// features.
CorrelationPrune prune_correlated(const FeatureTable& table, double threshold,
                                  const std::vector<std::string>& candidates = {});

struct RfeParams {
  ForestParams forest;
  std::vector<std::size_t> sizes;  // empty -> {2,4,6,8,10,15,20,30,50} clipped
  int folds = 10;
  bool one_at_a_time = false;  // eliminate one feature per step instead
  // Rank by mean-squared-error increase under per-column permutation instead
  // of impurity reduction.
  bool permutation_importance = false;
  // Sizes whose mean CV RMSE is within tie_tolerance of the minimum count as
  // tied; the smallest tied size wins. 0 = exact ties only.
  double tie_tolerance = 0.0;
};

struct SelectionReport {
  CorrelationPrune prune;
  double prune_threshold = 0.95;
  // (feature, importance) with importances max-normalized to 100, descending.
  std::vector<std::pair<std::string, double>> ranking;
  std::vector<std::string> selected;
  std::vector<std::pair<std::size_t, double>> cv_curve;  // size -> mean RMSE
  std::size_t optimal_size = 0;
};

// Recursive feature elimination driven by random-forest impurity importance:
// outer k-fold CV records hold-out RMSE along the elimination schedule, the
// size minimizing mean CV RMSE wins (ties -> smaller), and the final ranking
// is refit on all rows at that size.
SelectionReport rfe_select(const FeatureTable& table,
                           const std::vector<std::string>& candidates,
                           const RfeParams& params, std::uint64_t seed,
                           int threads = 1);

struct SelectParams {
  double correlation_threshold = 0.95;
  RfeParams rfe;
  std::vector<std::string> exclude = {"RIC"};  // never candidates
};

// prune_correlated followed by rfe_select on the surviving features.
SelectionReport select_features(const FeatureTable& table,
                                const SelectParams& params, std::uint64_t seed,
                                int threads = 1);

}  // namespace gliomics
