// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "volume.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace gliomics {

const char* roi_name(Roi roi) {
  switch (roi) {
    case Roi::WT: return "WT";
    case Roi::TC: return "TC";
    case Roi::ET: return "ET";
    case Roi::ED: return "ED";
    case Roi::Brain: return "brain";
  }
  return "?";
}

Roi roi_from_name(const std::string& name) {
  if (name == "WT") return Roi::WT;
  if (name == "TC") return Roi::TC;
  if (name == "ET") return Roi::ET;
  if (name == "ED") return Roi::ED;
  if (name == "brain") return Roi::Brain;
  fail(ErrorKind::config, "unknown ROI kind: " + name);
}

bool label_in_roi(std::uint8_t label, Roi roi) {
  switch (roi) {
    case Roi::WT: return label == 1 || label == 2 || label == 4;
    case Roi::TC: return label == 1 || label == 4;
    case Roi::ET: return label == 4;
    case Roi::ED: return label == 2;
    case Roi::Brain: return label != 0;
  }
  return false;
}

namespace {

void validate_geometry(const VolumeGeometry& g) {
  if (g.nx < 1 || g.ny < 1 || g.nz < 1)
    fail(ErrorKind::validation, "volume dims must be >= 1");
  if (!(g.sx > 0.0) || !(g.sy > 0.0) || !(g.sz > 0.0))
    fail(ErrorKind::validation, "voxel spacing must be > 0");
}

}  // namespace

void validate_labels(const LabelVolume& vol) {
  validate_geometry(vol.geom);
  std::set<int> bad;
  for (std::uint8_t v : vol.data)
    if (v != 0 && v != 1 && v != 2 && v != 4) bad.insert(v);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "label volume contains values outside {0,1,2,4}:";
    for (int v : bad) os << ' ' << v;
    fail(ErrorKind::validation, os.str());
  }
}

std::size_t RoiMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
}

RoiMask roi_mask(const LabelVolume& vol, Roi kind) {
  RoiMask mask;
  mask.geom = vol.geom;
  mask.kind = kind;
  mask.data.resize(vol.data.size());
  for (std::size_t i = 0; i < vol.data.size(); ++i)
    mask.data[i] = label_in_roi(vol.data[i], kind) ? 1 : 0;
  return mask;
}

namespace {

std::vector<std::array<int, 3>> neighbor_offsets(int connectivity) {
  if (connectivity != 6 && connectivity != 26)
    fail(ErrorKind::config, "connectivity must be 6 or 26");
  std::vector<std::array<int, 3>> offsets;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        if (connectivity == 6 &&
            std::abs(dx) + std::abs(dy) + std::abs(dz) != 1)
          continue;
        offsets.push_back({dx, dy, dz});
      }
  return offsets;
}

}  // namespace

ComponentSet connected_components(const RoiMask& mask, int connectivity) {
  const auto offsets = neighbor_offsets(connectivity);
  const auto& g = mask.geom;

  ComponentSet cs;
  cs.label_of_voxel.assign(mask.data.size(), 0);

  std::vector<std::size_t> stack;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t start = g.index(i, j, k);
        if (!mask.data[start] || cs.label_of_voxel[start] != 0) continue;

        const std::int32_t id = ++cs.count;
        std::size_t size = 0;
        stack.clear();
        stack.push_back(start);
        cs.label_of_voxel[start] = id;
        while (!stack.empty()) {
          const std::size_t v = stack.back();
          stack.pop_back();
          ++size;
          const int vi = static_cast<int>(v % g.nx);
          const int vj = static_cast<int>((v / g.nx) % g.ny);
          const int vk = static_cast<int>(v / (static_cast<std::size_t>(g.nx) * g.ny));
          for (const auto& d : offsets) {
            const int ni = vi + d[0], nj = vj + d[1], nk = vk + d[2];
            if (!g.contains(ni, nj, nk)) continue;
            const std::size_t u = g.index(ni, nj, nk);
            if (mask.data[u] && cs.label_of_voxel[u] == 0) {
              cs.label_of_voxel[u] = id;
              stack.push_back(u);
            }
          }
        }
        cs.sizes.push_back(size);
      }
  return cs;
}

IntensityVolume zscore_normalize(const IntensityVolume& vol,
                                 const RoiMask* mask) {
  if (mask && !mask->geom.same_grid(vol.geom))
    fail(ErrorKind::shape, "mask geometry does not match volume");

  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < vol.data.size(); ++i) {
    if (mask && !mask->data[i]) continue;
    sum += vol.data[i];
    ++n;
  }
  if (n < 2)
    fail(ErrorKind::degenerate, "z-score region must have at least 2 voxels");
  const double mean = sum / static_cast<double>(n);

  double ss = 0.0;
  for (std::size_t i = 0; i < vol.data.size(); ++i) {
    if (mask && !mask->data[i]) continue;
    const double d = vol.data[i] - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n);
  if (var <= 0.0)
    fail(ErrorKind::degenerate, "z-score region has zero variance");
  const double inv_sd = 1.0 / std::sqrt(var);

  IntensityVolume out(vol.geom);
  for (std::size_t i = 0; i < vol.data.size(); ++i) {
    if (mask && !mask->data[i])
      out.data[i] = 0.0f;
    else
      out.data[i] = static_cast<float>((vol.data[i] - mean) * inv_sd);
  }
  return out;
}

namespace {

bool has_exposed_face(const RoiMask& mask, int i, int j, int k) {
  static constexpr std::array<std::array<int, 3>, 6> kFaces = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (const auto& d : kFaces) {
    const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
    if (!mask.geom.contains(ni, nj, nk) || !mask.at(ni, nj, nk)) return true;
  }
  return false;
}

}  // namespace

std::vector<Vec3> boundary_voxel_centers(const RoiMask& mask) {
  std::vector<Vec3> pts;
  const auto& g = mask.geom;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (mask.at(i, j, k) && has_exposed_face(mask, i, j, k))
          pts.push_back(g.voxel_center(i, j, k));
  return pts;
}

std::vector<Vec3> mask_voxel_centers(const RoiMask& mask) {
  std::vector<Vec3> pts;
  const auto& g = mask.geom;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (mask.at(i, j, k)) pts.push_back(g.voxel_center(i, j, k));
  return pts;
}

}  // namespace gliomics
