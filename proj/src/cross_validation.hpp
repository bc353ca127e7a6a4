// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "feature_table.hpp"
#include "metrics.hpp"
#include "model_io.hpp"

namespace gliomics {

// Deterministic shuffled fold labels (sizes differ by at most one).
std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed);

struct CvParams {
  int k = 10;
  std::uint64_t seed = 0;
  SurvivalThresholds thresholds;
  int threads = 1;
};

struct CvResult {
  EvalReport report;                    // pooled out-of-fold metrics + per fold
  std::vector<double> oof_predictions;  // by original row order
};

// Each fold trains on the remaining k-1 folds (re-running feature selection
// when the model spec derives its predictors) and predicts the hold-out
// fold; metrics are pooled over all out-of-fold predictions.
CvResult cross_validate(const FeatureTable& table, const ModelSpec& spec,
                        const CvParams& params);

}  // namespace gliomics
