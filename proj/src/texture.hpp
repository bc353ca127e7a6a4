// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "volume.hpp"

namespace gliomics {

enum class MatrixFamily { GLCM, GLRLM, GLSZM, GLDM };

// A gray-level statistics matrix. Rows are indexed by the sorted distinct
// labels present in the ROI; the column meaning depends on the family:
// co-occurring gray level (GLCM), run length - 1 (GLRLM), zone size - 1
// (GLSZM) or dependence count (GLDM).
struct GrayLevelMatrix {
  MatrixFamily family = MatrixFamily::GLCM;
  std::vector<int> gray_levels;
  std::size_t rows = 0, cols = 0;
  std::vector<double> cells;  // row-major

  double& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
  double total() const;
};

// The 13 unique 3D directions (half of the 26-neighborhood).
const std::array<std::array<int, 3>, 13>& unique_directions();

// GLCM: voxel pairs at Chebyshev distance 1 over the 13 unique directions,
// accumulated, symmetrized and normalized to probabilities.
GrayLevelMatrix build_glcm(const LabelVolume& vol, const RoiMask& roi);

// GLRLM: maximal same-level runs per direction, summed over the 13
// directions. Raw counts.
GrayLevelMatrix build_glrlm(const LabelVolume& vol, const RoiMask& roi);

// GLSZM: 26-connected equal-level zones, one count per zone. Raw counts.
GrayLevelMatrix build_glszm(const LabelVolume& vol, const RoiMask& roi);

// GLDM: per voxel, the number of 26-neighbors inside the ROI with the same
// level (alpha = 0); matrix indexed by (level, dependence). Raw counts.
GrayLevelMatrix build_gldm(const LabelVolume& vol, const RoiMask& roi);

struct TextureFeatures {
  std::array<double, 22> glcm{};
  std::array<double, 16> glrlm{};
  std::array<double, 16> glszm{};
  std::array<double, 14> gldm{};
  // Set when a division-by-zero feature was defined by its 0 convention
  // (single gray level, or a ROI with no co-occurring pairs).
  bool degenerate = false;

  std::array<double, 68> as_array() const;
  static const std::array<std::string, 68>& names();  // family-prefixed
};

struct GlcmResult {
  std::array<double, 22> values{};
  bool degenerate = false;
};

GlcmResult glcm_features(const GrayLevelMatrix& m);
std::array<double, 16> glrlm_features(const GrayLevelMatrix& m,
                                      std::size_t n_voxels);
std::array<double, 16> glszm_features(const GrayLevelMatrix& m,
                                      std::size_t n_voxels);
std::array<double, 14> gldm_features(const GrayLevelMatrix& m);

TextureFeatures texture_features(const LabelVolume& vol, const RoiMask& roi);

}  // namespace gliomics
