// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace gliomics {

// Tumor structure map labels.
inline constexpr std::uint8_t kLabelBackground = 0;
inline constexpr std::uint8_t kLabelNecrosis = 1;   // NCR/NET
inline constexpr std::uint8_t kLabelEdema = 2;      // ED
inline constexpr std::uint8_t kLabelEnhancing = 4;  // ET

struct VolumeGeometry {
  int nx = 0, ny = 0, nz = 0;       // voxel counts, each >= 1
  double sx = 1.0, sy = 1.0, sz = 1.0;  // mm per voxel, each > 0
  Vec3 origin{};                    // physical position of voxel (0,0,0), mm

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(ny) * static_cast<std::size_t>(k));
  }

  bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz;
  }

  Vec3 voxel_center(int i, int j, int k) const {
    return {origin.x + i * sx, origin.y + j * sy, origin.z + k * sz};
  }

  double voxel_volume() const { return sx * sy * sz; }

  // Grid compatibility: same voxel counts and spacing (origin not compared).
  bool same_grid(const VolumeGeometry& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz && sx == o.sx &&
           sy == o.sy && sz == o.sz;
  }
};

// Voxel data in x-fastest (Fortran) order, matching the NIfTI payload.
template <typename T>
struct Volume {
  VolumeGeometry geom;
  std::vector<T> data;

  Volume() = default;
  explicit Volume(const VolumeGeometry& g, T fill = T{})
      : geom(g), data(g.voxel_count(), fill) {}

  T& at(int i, int j, int k) { return data[geom.index(i, j, k)]; }
  T at(int i, int j, int k) const { return data[geom.index(i, j, k)]; }
};

using LabelVolume = Volume<std::uint8_t>;
using IntensityVolume = Volume<float>;

enum class Roi { WT, TC, ET, ED, Brain };

const char* roi_name(Roi roi);
Roi roi_from_name(const std::string& name);

bool label_in_roi(std::uint8_t label, Roi roi);

// Throws a validation error listing any label outside {0,1,2,4}, and checks
// the geometry invariants (dims >= 1, spacing > 0).
void validate_labels(const LabelVolume& vol);

struct RoiMask {
  VolumeGeometry geom;
  Roi kind = Roi::WT;
  std::vector<std::uint8_t> data;  // 0/1 per voxel

  bool at(int i, int j, int k) const { return data[geom.index(i, j, k)] != 0; }
  std::size_t count() const;
};

RoiMask roi_mask(const LabelVolume& vol, Roi kind);

struct ComponentSet {
  int count = 0;
  std::vector<std::int32_t> label_of_voxel;  // 0 outside mask, else 1..count
  std::vector<std::size_t> sizes;            // sizes[c-1] = voxels in c
};

// connectivity: 6 (faces) or 26 (faces+edges+corners).
ComponentSet connected_components(const RoiMask& mask, int connectivity);

// Masked z-score: the masked region of the output has mean 0 and population
// standard deviation 1; voxels outside the mask are set to 0. A null mask
// normalizes over the whole volume. Throws on zero variance.
IntensityVolume zscore_normalize(const IntensityVolume& vol,
                                 const RoiMask* mask = nullptr);

// Centers (mm) of mask voxels with at least one exposed face (6-adjacency).
std::vector<Vec3> boundary_voxel_centers(const RoiMask& mask);

// All mask voxel centers (mm).
std::vector<Vec3> mask_voxel_centers(const RoiMask& mask);

}  // namespace gliomics
