// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cross_validation.hpp"
#include "ellipsoid.hpp"
#include "feature_names.hpp"
#include "feature_table.hpp"
#include "model_io.hpp"
#include "volume.hpp"

#include "json.hpp"

namespace gliomics {

struct ExtractOptions {
  MveParams mve;
  // Optional brain mask for the centroid reference; by default the centroid
  // offsets use the geometric center of the volume extent.
  const RoiMask* brain_mask = nullptr;
};

struct FeatureVector {
  std::vector<double> values;  // canonical_feature_names() order, 163 values
  std::vector<std::string> warnings;
};

// The full per-subject extraction: 81 features per ROI for WT and TC plus
// the relative invasiveness coefficient.
FeatureVector extract_all(const LabelVolume& vol,
                          const ExtractOptions& options = {});

struct CohortExtraction {
  FeatureTable table;
  struct Failure {
    std::string subject;
    std::string reason;
  };
  std::vector<Failure> failures;  // excluded subjects
  std::vector<std::string> warnings;
};

// Scans <root>/<subject>/seg.nii[.gz] with metadata from <root>/cohort.csv
// (id, age, survival_days, resection_status). Subjects that fail to extract
// are excluded and recorded instead of aborting the batch.
CohortExtraction extract_cohort(const std::string& root_dir,
                                const ExtractOptions& options, int threads);

struct StudyConfig {
  std::string input_dir;
  std::string holdout_dir;  // optional independent validation set
  std::string output_dir;
  std::uint64_t seed = 7;
  int k_folds = 10;
  bool gtr_only = true;
  int threads = 0;  // 0 = hardware
  SelectParams selection;
  ForestParams forest;       // radiomics model
  SvrParams svr;             // invasiveness model
  SurvivalThresholds thresholds;
  bool selection_per_fold = false;
  MveParams mve;
};

StudyConfig study_config_from_json(const nlohmann::json& j);

nlohmann::json eval_report_to_json(const EvalReport& report);

// Runs extract -> assemble -> select -> train -> evaluate, persists every
// stage artifact under output_dir, and returns the report document with
// training, cross-validation and optional holdout metrics per model.
nlohmann::json run_study(const StudyConfig& config);

// Aligned text rendering of the per-model metric grid.
std::string study_report_text(const nlohmann::json& report);

}  // namespace gliomics
