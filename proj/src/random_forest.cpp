// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "random_forest.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace gliomics {

namespace {

struct TreeBuilder {
  const Matrix& x;
  std::span<const double> y;
  const ForestParams& params;
  int mtry;
  Rng rng;
  Tree tree;
  std::vector<double> importance;

  // Scratch buffers for split search.
  std::vector<std::pair<double, double>> sorted;  // (feature value, target)

  TreeBuilder(const Matrix& x_, std::span<const double> y_,
              const ForestParams& p_, int mtry_, Rng rng_)
      : x(x_), y(y_), params(p_), mtry(mtry_), rng(rng_) {
    importance.assign(x.cols, 0.0);
  }

  std::int32_t build(std::vector<std::size_t>& samples) {
    const std::size_t n = samples.size();
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s : samples) {
      sum += y[s];
      sum_sq += y[s] * y[s];
    }
    const double mean = sum / static_cast<double>(n);
    const double node_ss = sum_sq - sum * mean;

    const auto make_leaf = [&]() {
      TreeNode leaf;
      leaf.value = mean;
      tree.nodes.push_back(leaf);
      return static_cast<std::int32_t>(tree.nodes.size() - 1);
    };

    if (n < 2 * static_cast<std::size_t>(params.min_leaf) || node_ss <= 1e-12)
      return make_leaf();

    // Best split over mtry randomly drawn features.
    const auto features =
        rng.sample_without_replacement(x.cols, static_cast<std::size_t>(mtry));
    double best_gain = 0.0;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    bool found = false;

    for (std::size_t f : features) {
      sorted.clear();
      for (std::size_t s : samples) sorted.emplace_back(x.at(s, f), y[s]);
      std::sort(sorted.begin(), sorted.end());

      double left_sum = 0.0, left_sq = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += sorted[i].second;
        left_sq += sorted[i].second * sorted[i].second;
        const std::size_t left_n = i + 1;
        const std::size_t right_n = n - left_n;
        if (left_n < static_cast<std::size_t>(params.min_leaf)) continue;
        if (right_n < static_cast<std::size_t>(params.min_leaf)) break;
        if (sorted[i].first == sorted[i + 1].first) continue;

        const double right_sum = sum - left_sum;
        const double right_sq = sum_sq - left_sq;
        const double left_ss =
            left_sq - left_sum * left_sum / static_cast<double>(left_n);
        const double right_ss =
            right_sq - right_sum * right_sum / static_cast<double>(right_n);
        const double gain = node_ss - left_ss - right_ss;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_feature = f;
          best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
          found = true;
        }
      }
    }

    if (!found) return make_leaf();

    std::vector<std::size_t> left_samples, right_samples;
    left_samples.reserve(n);
    right_samples.reserve(n);
    for (std::size_t s : samples)
      (x.at(s, best_feature) <= best_threshold ? left_samples : right_samples)
          .push_back(s);

    importance[best_feature] += best_gain;

    TreeNode node;
    node.feature = static_cast<std::int32_t>(best_feature);
    node.threshold = best_threshold;
    tree.nodes.push_back(node);
    const std::int32_t id = static_cast<std::int32_t>(tree.nodes.size() - 1);
    tree.nodes[id].left = build(left_samples);
    tree.nodes[id].right = build(right_samples);
    return id;
  }
};

}  // namespace

ForestModel fit_forest(const Matrix& x, std::span<const double> y,
                       const ForestParams& params, std::uint64_t seed,
                       int threads) {
  const std::size_t n = x.rows;
  if (y.size() != n) fail(ErrorKind::shape, "fit_forest: X rows != y length");
  if (n < 2 * static_cast<std::size_t>(std::max(1, params.min_leaf)))
    fail(ErrorKind::validation,
         "fit_forest: need at least 2*min_leaf training samples");
  if (x.cols == 0) fail(ErrorKind::validation, "fit_forest: no features");
  if (params.n_trees < 1) fail(ErrorKind::config, "fit_forest: n_trees < 1");
  if (params.min_leaf < 1) fail(ErrorKind::config, "fit_forest: min_leaf < 1");

  const int mtry =
      params.mtry > 0
          ? std::min<int>(params.mtry, static_cast<int>(x.cols))
          : static_cast<int>((x.cols + 2) / 3);

  ForestModel model;
  model.params = params;
  model.seed = seed;
  model.trees.resize(params.n_trees);
  model.importance.assign(x.cols, 0.0);

  const Rng root(seed);
  std::vector<std::vector<double>> tree_importance(params.n_trees);

  parallel_for(static_cast<std::size_t>(params.n_trees), threads,
               [&](std::size_t t) {
                 Rng rng = root.child(t);
                 std::vector<std::size_t> samples(n);
                 if (params.bootstrap) {
                   for (std::size_t i = 0; i < n; ++i)
                     samples[i] = static_cast<std::size_t>(rng.below(n));
                   // Root node order must not depend on draw order.
                   std::sort(samples.begin(), samples.end());
                 } else {
                   for (std::size_t i = 0; i < n; ++i) samples[i] = i;
                 }
                 TreeBuilder builder(x, y, params, mtry, rng);
                 builder.build(samples);
                 model.trees[t] = std::move(builder.tree);
                 tree_importance[t] = std::move(builder.importance);
               });

  for (const auto& imp : tree_importance)
    for (std::size_t f = 0; f < x.cols; ++f) model.importance[f] += imp[f];
  return model;
}

double predict_row(const ForestModel& model, std::span<const double> row) {
  double sum = 0.0;
  for (const Tree& tree : model.trees) {
    std::int32_t node = 0;
    while (tree.nodes[node].feature >= 0) {
      const auto& nd = tree.nodes[node];
      if (static_cast<std::size_t>(nd.feature) >= row.size())
        fail(ErrorKind::shape, "forest predict: wrong number of predictors");
      node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    sum += tree.nodes[node].value;
  }
  return sum / static_cast<double>(model.trees.size());
}

std::vector<double> predict(const ForestModel& model, const Matrix& x) {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict_row(model, x.row(r));
  return out;
}

}  // namespace gliomics
