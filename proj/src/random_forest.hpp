// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "matrix.hpp"

namespace gliomics {

struct ForestParams {
  int n_trees = 500;
  int mtry = 0;      // 0 -> ceil(p / 3)
  int min_leaf = 5;  // minimum training targets per leaf
  bool bootstrap = true;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 for leaves
  double threshold = 0.0;     // goes left when value <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // leaf mean
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
  ForestParams params;
  std::uint64_t seed = 0;
  std::vector<Tree> trees;
  // Summed variance-reduction per feature over all splits of all trees.
  std::vector<double> importance;
};

// Bootstrap aggregation of greedy variance-reduction trees; per-tree RNG
// streams derive from the seed, so serial and parallel fits are identical.
ForestModel fit_forest(const Matrix& x, std::span<const double> y,
                       const ForestParams& params, std::uint64_t seed,
                       int threads = 1);

double predict_row(const ForestModel& model, std::span<const double> row);
std::vector<double> predict(const ForestModel& model, const Matrix& x);

}  // namespace gliomics
