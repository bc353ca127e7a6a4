// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"
#include "rng.hpp"

namespace gliomics {

namespace {

// Pearson correlation matrix over the given columns; constant columns get
// correlation 0 with everything and are reported.
struct CorrMatrix {
  std::size_t p = 0;
  std::vector<double> r;  // p x p
  std::vector<bool> constant;

  double at(std::size_t i, std::size_t j) const { return r[i * p + j]; }
};

CorrMatrix correlations(const FeatureTable& table,
                        const std::vector<std::size_t>& cols) {
  const std::size_t n = table.n_subjects();
  const std::size_t p = cols.size();
  CorrMatrix cm;
  cm.p = p;
  cm.r.assign(p * p, 0.0);
  cm.constant.assign(p, false);

  std::vector<std::vector<double>> centered(p, std::vector<double>(n));
  std::vector<double> norms(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += table.values.at(r, cols[c]);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      centered[c][r] = table.values.at(r, cols[c]) - mean;
      ss += centered[c][r] * centered[c][r];
    }
    norms[c] = std::sqrt(ss);
    cm.constant[c] = !(ss > 0.0);
  }

  for (std::size_t i = 0; i < p; ++i) {
    cm.r[i * p + i] = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      double v = 0.0;
      if (!cm.constant[i] && !cm.constant[j]) {
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += centered[i][r] * centered[j][r];
        v = dot / (norms[i] * norms[j]);
      }
      cm.r[i * p + j] = v;
      cm.r[j * p + i] = v;
    }
  }
  return cm;
}

std::vector<std::size_t> candidate_columns(
    const FeatureTable& table, const std::vector<std::string>& candidates) {
  std::vector<std::size_t> cols;
  if (candidates.empty()) {
    cols.resize(table.n_features());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  } else {
    for (const auto& name : candidates) cols.push_back(table.feature_index(name));
  }
  return cols;
}

double holdout_rmse(const ForestModel& model, const Matrix& x,
                    std::span<const double> y) {
  double ss = 0.0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double d = predict_row(model, x.row(r)) - y[r];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(x.rows));
}

// MSE increase per feature when that column is shuffled (seeded), against
// the fitted forest's training data.
std::vector<double> permutation_importance(const ForestModel& model,
                                           const Matrix& x,
                                           std::span<const double> y,
                                           Rng rng) {
  const auto mse_of = [&](const Matrix& m) {
    double ss = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
      const double d = predict_row(model, m.row(r)) - y[r];
      ss += d * d;
    }
    return ss / static_cast<double>(m.rows);
  };
  const double baseline = mse_of(x);
  std::vector<double> importance(x.cols, 0.0);
  Matrix work = x;
  std::vector<double> column(x.rows);
  for (std::size_t c = 0; c < x.cols; ++c) {
    for (std::size_t r = 0; r < x.rows; ++r) column[r] = x.at(r, c);
    rng.shuffle(column);
    for (std::size_t r = 0; r < x.rows; ++r) work.at(r, c) = column[r];
    importance[c] = mse_of(work) - baseline;
    for (std::size_t r = 0; r < x.rows; ++r) work.at(r, c) = x.at(r, c);
  }
  return importance;
}

// Indices of the `keep` largest importances, preserving column order.
std::vector<std::size_t> top_columns(const std::vector<double>& importance,
                                     const std::vector<std::size_t>& current,
                                     std::size_t keep) {
  std::vector<std::size_t> order(current.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return importance[a] > importance[b];
  });
  std::set<std::size_t> chosen(order.begin(),
                               order.begin() + static_cast<long>(keep));
  std::vector<std::size_t> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < current.size(); ++i)
    if (chosen.count(i)) out.push_back(current[i]);
  return out;
}

}  // namespace

CorrelationPrune prune_correlated(const FeatureTable& table, double threshold,
                                  const std::vector<std::string>& candidates) {
  if (table.n_subjects() < 2)
    fail(ErrorKind::validation, "prune_correlated: need at least 2 subjects");
  const std::vector<std::size_t> cols = candidate_columns(table, candidates);
  const std::size_t p = cols.size();
  const CorrMatrix cm = correlations(table, cols);

  // Mean absolute correlation per feature, computed once up front.
  std::vector<double> mean_abs(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      if (j != i) s += std::abs(cm.at(i, j));
    mean_abs[i] = p > 1 ? s / static_cast<double>(p - 1) : 0.0;
  }

  CorrelationPrune out;
  std::vector<bool> dropped(p, false);
  for (std::size_t i = 0; i < p; ++i) {
    if (dropped[i]) continue;
    for (std::size_t j = i + 1; j < p; ++j) {
      if (dropped[i]) break;
      if (dropped[j]) continue;
      if (std::abs(cm.at(i, j)) <= threshold) continue;
      // Drop whichever of the pair correlates more with everything else;
      // ties drop the later feature.
      const std::size_t victim = mean_abs[j] >= mean_abs[i] ? j : i;
      const std::size_t survivor = victim == j ? i : j;
      dropped[victim] = true;
      out.removed.push_back({table.feature_names[cols[survivor]],
                             table.feature_names[cols[victim]], cm.at(i, j)});
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (!dropped[i]) out.kept.push_back(table.feature_names[cols[i]]);
    if (cm.constant[i] && !dropped[i])
      out.constant_features.push_back(table.feature_names[cols[i]]);
  }
  return out;
}

SelectionReport rfe_select(const FeatureTable& table,
                           const std::vector<std::string>& candidates,
                           const RfeParams& params, std::uint64_t seed,
                           int threads) {
  const std::vector<std::size_t> all_cols = candidate_columns(table, candidates);
  const std::size_t p = all_cols.size();
  const std::size_t n = table.n_subjects();
  if (p == 0) fail(ErrorKind::config, "rfe_select: no candidate features");
  if (params.folds < 2) fail(ErrorKind::config, "rfe_select: folds must be >= 2");
  if (n < static_cast<std::size_t>(params.folds))
    fail(ErrorKind::config, "rfe_select: more folds than subjects");

  // Elimination schedule, descending.
  std::vector<std::size_t> sizes = params.sizes;
  if (sizes.empty()) {
    if (params.one_at_a_time) {
      for (std::size_t s = p >= 2 ? p - 1 : 1; s >= 1; --s) {
        sizes.push_back(s);
        if (s == 1) break;
      }
    } else {
      for (std::size_t s : {2u, 4u, 6u, 8u, 10u, 15u, 20u, 30u, 50u})
        if (s <= p) sizes.push_back(s);
      if (sizes.empty()) sizes.push_back(p);
    }
  } else {
    for (std::size_t s : sizes) {
      if (s == 0) fail(ErrorKind::config, "rfe_select: subset size 0");
      if (s > p)
        fail(ErrorKind::config,
             "rfe_select: subset size " + std::to_string(s) +
                 " exceeds feature count " + std::to_string(p));
    }
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  // Deterministic shuffled fold assignment.
  const Rng root(seed);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  {
    Rng shuffler = root.child(0);
    shuffler.shuffle(perm);
  }
  std::vector<int> fold_of(n);
  for (std::size_t i = 0; i < n; ++i)
    fold_of[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(params.folds));

  const std::vector<double>& y = table.survival_days;

  // Per-fold elimination walk. rmse[f][k] = hold-out RMSE at sizes[k].
  std::vector<std::vector<double>> rmse(
      params.folds, std::vector<double>(sizes.size(), 0.0));

  auto eliminate = [&](const std::vector<std::size_t>& train_rows,
                       const std::vector<std::size_t>& val_rows, Rng fold_rng,
                       std::vector<double>* rmse_row,
                       std::vector<std::size_t>* final_cols,
                       std::vector<double>* final_importance,
                       std::size_t stop_size) {
    std::vector<std::size_t> current = all_cols;
    std::vector<double> y_train, y_val;
    for (std::size_t r : train_rows) y_train.push_back(y[r]);
    for (std::size_t r : val_rows) y_val.push_back(y[r]);
    const Matrix x_train_all = table.values.take_rows(train_rows);
    const Matrix x_val_all =
        val_rows.empty() ? Matrix() : table.values.take_rows(val_rows);

    std::uint64_t step = 0;
    Matrix x_train = x_train_all.take_cols(current);
    ForestModel model =
        fit_forest(x_train, y_train, params.forest,
                   fold_rng.child(step++).seed(), threads);
    const auto rank_importance = [&]() {
      return params.permutation_importance
                 ? permutation_importance(model, x_train, y_train,
                                          fold_rng.child(500 + step))
                 : model.importance;
    };
    std::vector<double> importance = rank_importance();

    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const std::size_t target = sizes[k];
      if (target < current.size()) {
        current = top_columns(importance, current, target);
        x_train = x_train_all.take_cols(current);
        model = fit_forest(x_train, y_train, params.forest,
                           fold_rng.child(step++).seed(), threads);
        importance = rank_importance();
      }
      if (rmse_row) {
        const Matrix x_val = x_val_all.take_cols(current);
        (*rmse_row)[k] = holdout_rmse(model, x_val, y_val);
      }
      if (final_cols && target == stop_size) {
        *final_cols = current;
        *final_importance = importance;
        return;
      }
    }
    if (final_cols) {
      *final_cols = current;
      *final_importance = importance;
    }
  };

  for (int f = 0; f < params.folds; ++f) {
    std::vector<std::size_t> train_rows, val_rows;
    for (std::size_t r = 0; r < n; ++r)
      (fold_of[r] == f ? val_rows : train_rows).push_back(r);
    eliminate(train_rows, val_rows, root.child(1000 + f), &rmse[f], nullptr,
              nullptr, 0);
  }

  SelectionReport report;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    double mean = 0.0;
    for (int f = 0; f < params.folds; ++f) mean += rmse[f][k];
    mean /= static_cast<double>(params.folds);
    report.cv_curve.emplace_back(sizes[k], mean);
  }
  // Ties go to the smaller subset; sizes are descending, so the last index
  // within tie_tolerance of the minimum is the smallest tied size.
  double best_rmse = report.cv_curve[0].second;
  for (const auto& [size, value] : report.cv_curve)
    best_rmse = std::min(best_rmse, value);
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    if (report.cv_curve[k].second <= best_rmse + params.tie_tolerance)
      best_k = k;
  report.optimal_size = sizes[best_k];

  // Final elimination on all rows down to the optimal size.
  std::vector<std::size_t> all_rows(n);
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;
  std::vector<std::size_t> final_cols;
  std::vector<double> final_importance;
  eliminate(all_rows, {}, root.child(999), nullptr, &final_cols,
            &final_importance, report.optimal_size);

  std::vector<std::size_t> order(final_cols.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return final_importance[a] > final_importance[b];
  });
  const double top = final_importance.empty() ? 0.0 : final_importance[order[0]];
  for (std::size_t i : order) {
    // Permutation importances can go slightly negative; floor at 0 so the
    // reported scale stays in [0, 100].
    const double scaled =
        top > 0.0 ? std::max(0.0, 100.0 * (final_importance[i] / top)) : 0.0;
    report.ranking.emplace_back(table.feature_names[final_cols[i]], scaled);
    report.selected.push_back(table.feature_names[final_cols[i]]);
  }
  return report;
}

SelectionReport select_features(const FeatureTable& table,
                                const SelectParams& params, std::uint64_t seed,
                                int threads) {
  std::vector<std::string> candidates;
  for (const auto& name : table.feature_names)
    if (std::find(params.exclude.begin(), params.exclude.end(), name) ==
        params.exclude.end())
      candidates.push_back(name);

  CorrelationPrune prune =
      prune_correlated(table, params.correlation_threshold, candidates);
  SelectionReport report =
      rfe_select(table, prune.kept, params.rfe, seed, threads);
  report.prune = std::move(prune);
  report.prune_threshold = params.correlation_threshold;
  return report;
}

}  // namespace gliomics
