// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace gliomics {

namespace {

// Vote priority for ties: enhancing tumor first, then core, edema, background.
constexpr std::array<std::uint8_t, 4> kTiePriority = {4, 1, 2, 0};

std::size_t label_slot(std::uint8_t label) {
  switch (label) {
    case 0: return 0;
    case 1: return 1;
    case 2: return 2;
    case 4: return 3;
  }
  fail(ErrorKind::validation, "unexpected label in ensemble member");
}

}  // namespace

LabelVolume majority_vote(std::span<const LabelVolume* const> members,
                          std::span<const double> weights) {
  if (members.empty())
    fail(ErrorKind::validation, "majority_vote: no ensemble members");
  const VolumeGeometry& g = members[0]->geom;
  for (const LabelVolume* m : members)
    if (!m->geom.same_grid(g))
      fail(ErrorKind::shape, "majority_vote: member geometry mismatch");
  if (!weights.empty() && weights.size() != members.size())
    fail(ErrorKind::shape, "majority_vote: weight count != member count");
  for (double w : weights)
    if (!(w > 0.0))
      fail(ErrorKind::validation, "majority_vote: weights must be > 0");

  LabelVolume out(g);
  const std::size_t n = g.voxel_count();
  for (std::size_t v = 0; v < n; ++v) {
    std::array<double, 4> votes{};  // slots for labels 0,1,2,4
    for (std::size_t m = 0; m < members.size(); ++m)
      votes[label_slot(members[m]->data[v])] +=
          weights.empty() ? 1.0 : weights[m];
    std::uint8_t winner = 0;
    double best = -1.0;
    for (std::uint8_t label : kTiePriority) {
      const double w = votes[label_slot(label)];
      if (w > best) {
        best = w;
        winner = label;
      }
    }
    out.data[v] = winner;
  }
  return out;
}

LabelVolume majority_vote(const std::vector<LabelVolume>& members,
                          std::span<const double> weights) {
  std::vector<const LabelVolume*> ptrs;
  ptrs.reserve(members.size());
  for (const auto& m : members) ptrs.push_back(&m);
  return majority_vote(std::span<const LabelVolume* const>(ptrs), weights);
}

LabelVolume postprocess(const LabelVolume& vol, const IntensityVolume* t1gd,
                        const PostprocessParams& params) {
  validate_labels(vol);
  if (params.intensity_filter && t1gd == nullptr)
    fail(ErrorKind::config,
         "postprocess: intensity filter enabled without a T1Gd volume");
  if (t1gd && !t1gd->geom.same_grid(vol.geom))
    fail(ErrorKind::shape, "postprocess: T1Gd geometry mismatch");

  LabelVolume out = vol;
  const VolumeGeometry& g = out.geom;

  // Pass 1: drop small isolated components.
  {
    const ComponentSet wt =
        connected_components(roi_mask(out, Roi::WT), params.connectivity);
    for (std::size_t v = 0; v < out.data.size(); ++v)
      if (wt.label_of_voxel[v] > 0 &&
          wt.sizes[wt.label_of_voxel[v] - 1] < params.min_wt_voxels)
        out.data[v] = 0;

    const ComponentSet et =
        connected_components(roi_mask(out, Roi::ET), params.connectivity);
    for (std::size_t v = 0; v < out.data.size(); ++v)
      if (et.label_of_voxel[v] > 0 &&
          et.sizes[et.label_of_voxel[v] - 1] < params.min_et_voxels)
        out.data[v] = 1;
  }

  // Pass 2: tumour core consistency with the enhancing volume, then
  // re-label edema voxels fully enclosed by core.
  {
    std::size_t et_total = 0;
    for (std::uint8_t v : out.data)
      if (v == 4) ++et_total;
    if (et_total < params.et_floor_voxels)
      for (std::uint8_t& v : out.data)
        if (v == 4) v = 1;

    LabelVolume repaired = out;
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          if (out.at(i, j, k) != 2) continue;
          bool enclosed = true;
          for (int dz = -1; dz <= 1 && enclosed; ++dz)
            for (int dy = -1; dy <= 1 && enclosed; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                const int ni = i + dx, nj = j + dy, nk = k + dz;
                if (!g.contains(ni, nj, nk) ||
                    !label_in_roi(out.at(ni, nj, nk), Roi::TC)) {
                  enclosed = false;
                  break;
                }
              }
          if (enclosed) repaired.at(i, j, k) = 1;
        }
    out = std::move(repaired);
  }

  // Pass 3: enhancing voxels that are dim on (z-scored) T1Gd become core.
  if (params.intensity_filter) {
    for (std::size_t v = 0; v < out.data.size(); ++v)
      if (out.data[v] == 4 &&
          static_cast<double>(t1gd->data[v]) < params.z_et)
        out.data[v] = 1;
  }

  return out;
}

namespace {

double percentile(std::vector<double>& values, int pct) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  if (pct >= 100) return values.back();
  const double pos =
      static_cast<double>(pct) / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double directed_distance(const std::vector<Vec3>& from,
                         const std::vector<Vec3>& to, int pct) {
  std::vector<double> nearest(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& q : to) {
      const Vec3 d = from[i] - q;
      best = std::min(best, d.dot(d));
    }
    nearest[i] = std::sqrt(best);
  }
  return percentile(nearest, pct);
}

RegionScore region_score(const RoiMask& pred, const RoiMask& ref, int pct) {
  RegionScore score;
  const std::size_t np = pred.count();
  const std::size_t ng = ref.count();
  if (np == 0 && ng == 0) {
    score.dice = 1.0;
    score.hausdorff = 0.0;
    return score;
  }
  std::size_t overlap = 0;
  for (std::size_t v = 0; v < pred.data.size(); ++v)
    if (pred.data[v] && ref.data[v]) ++overlap;
  score.dice = 2.0 * static_cast<double>(overlap) /
               static_cast<double>(np + ng);
  if (np == 0 || ng == 0) {
    score.hausdorff = std::numeric_limits<double>::infinity();
    return score;
  }
  const std::vector<Vec3> pb = boundary_voxel_centers(pred);
  const std::vector<Vec3> gb = boundary_voxel_centers(ref);
  score.hausdorff =
      std::max(directed_distance(pb, gb, pct), directed_distance(gb, pb, pct));
  return score;
}

}  // namespace

SegScore seg_metrics(const LabelVolume& pred, const LabelVolume& ref,
                     int hd_percentile) {
  if (!pred.geom.same_grid(ref.geom))
    fail(ErrorKind::shape, "seg_metrics: geometry mismatch");
  if (hd_percentile != 100 && hd_percentile != 95)
    fail(ErrorKind::config, "seg_metrics: percentile must be 100 or 95");

  SegScore score;
  score.hd_percentile = hd_percentile;
  score.et = region_score(roi_mask(pred, Roi::ET), roi_mask(ref, Roi::ET),
                          hd_percentile);
  score.wt = region_score(roi_mask(pred, Roi::WT), roi_mask(ref, Roi::WT),
                          hd_percentile);
  score.tc = region_score(roi_mask(pred, Roi::TC), roi_mask(ref, Roi::TC),
                          hd_percentile);
  return score;
}

}  // namespace gliomics
