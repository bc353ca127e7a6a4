// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "volume.hpp"

namespace gliomics {

// Weighted per-voxel plurality vote over label maps with identical grids.
// Ties break by label priority 4 > 1 > 2 > 0.
LabelVolume majority_vote(std::span<const LabelVolume* const> members,
                          std::span<const double> weights = {});
LabelVolume majority_vote(const std::vector<LabelVolume>& members,
                          std::span<const double> weights = {});

struct PostprocessParams {
  std::size_t min_wt_voxels = 500;   // smaller WT components -> background
  std::size_t min_et_voxels = 50;    // smaller ET components -> label 1
  std::size_t et_floor_voxels = 500; // total ET below this -> all ET to 1
  bool intensity_filter = false;     // requires a z-scored T1Gd volume
  double z_et = 0.0;                 // ET voxels below this z-score -> 1
  int connectivity = 26;
};

// Three passes, in order: small-component removal, core/enhancing size
// consistency plus enclosed-edema repair, and an optional intensity filter
// on the enhancing label.
LabelVolume postprocess(const LabelVolume& vol, const IntensityVolume* t1gd,
                        const PostprocessParams& params = {});

struct RegionScore {
  double dice = 0.0;
  double hausdorff = 0.0;  // mm; +inf when exactly one mask is empty
};

struct SegScore {
  RegionScore et, wt, tc;
  int hd_percentile = 100;  // 100 = classic Hausdorff, 95 = HD95
};

// Dice and (percentile) Hausdorff distance per region. Distances are exact
// pairwise boundary-voxel distances in mm; each direction is reduced to its
// percentile and the two directions combine by max.
SegScore seg_metrics(const LabelVolume& pred, const LabelVolume& ref,
                     int hd_percentile = 100);

}  // namespace gliomics
