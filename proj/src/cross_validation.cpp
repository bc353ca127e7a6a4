// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "cross_validation.hpp"

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace gliomics {

std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) fail(ErrorKind::config, "cross-validation requires k >= 2");
  if (n < static_cast<std::size_t>(k))
    fail(ErrorKind::config, "cross-validation requires n >= k");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i)
    fold[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return fold;
}

CvResult cross_validate(const FeatureTable& table, const ModelSpec& spec,
                        const CvParams& params) {
  const std::size_t n = table.n_subjects();
  const std::vector<int> fold = fold_assignment(n, params.k, params.seed);

  CvResult result;
  result.oof_predictions.assign(n, 0.0);
  std::vector<EvalReport> fold_reports(params.k);
  std::vector<bool> fold_scored(params.k, false);

  const Rng root(params.seed);
  parallel_for(static_cast<std::size_t>(params.k), params.threads, [&](std::size_t f) {
    std::vector<std::size_t> train_rows, val_rows;
    for (std::size_t r = 0; r < n; ++r)
      (fold[r] == static_cast<int>(f) ? val_rows : train_rows).push_back(r);

    const FeatureTable train = table.take_rows(train_rows);
    const FeatureTable val = table.take_rows(val_rows);
    // Fold-local model seed; worker threads stay single inside folds.
    const TrainedModel model =
        train_model(train, spec, root.child(f + 1).seed(), 1);
    const std::vector<double> pred = predict(model, val);

    for (std::size_t i = 0; i < val_rows.size(); ++i)
      result.oof_predictions[val_rows[i]] = pred[i];
    if (val_rows.size() >= 2) {
      std::vector<double> truth;
      for (std::size_t r : val_rows) truth.push_back(table.survival_days[r]);
      fold_reports[f] = compute_metrics(pred, truth, params.thresholds);
      fold_scored[f] = true;
    }
  });

  result.report = compute_metrics(result.oof_predictions, table.survival_days,
                                  params.thresholds);
  for (int f = 0; f < params.k; ++f)
    if (fold_scored[f]) result.report.per_fold.push_back(fold_reports[f]);
  return result;
}

}  // namespace gliomics
