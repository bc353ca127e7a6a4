// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace gliomics {

// The canonical 163-entry feature order: for each ROI in {WT, TC}, the 13
// morphological features then the 68 texture features (all prefixed
// "<ROI>_"), and finally "RIC".
const std::vector<std::string>& canonical_feature_names();

inline constexpr std::size_t kFeaturesPerRoi = 81;
inline constexpr std::size_t kRadiomicsFeatureCount = 162;
inline constexpr std::size_t kTotalFeatureCount = 163;

}  // namespace gliomics
