// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "texture_oracle.hpp"

#include <cmath>
#include <set>
#include <vector>

namespace gliomics::oracle {

namespace {

bool in_roi(const RoiMask& roi, int i, int j, int k) {
  return roi.geom.contains(i, j, k) && roi.at(i, j, k);
}

std::vector<std::array<int, 3>> all_26_offsets() {
  std::vector<std::array<int, 3>> offsets;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx != 0 || dy != 0 || dz != 0) offsets.push_back({dx, dy, dz});
  return offsets;
}

std::vector<std::array<int, 3>> half_offsets() {
  std::vector<std::array<int, 3>> offsets;
  for (const auto& d : all_26_offsets())
    if (d[2] > 0 || (d[2] == 0 && d[1] > 0) ||
        (d[2] == 0 && d[1] == 0 && d[0] > 0))
      offsets.push_back(d);
  return offsets;
}

}  // namespace

ValueMatrix glcm_counts(const LabelVolume& vol, const RoiMask& roi) {
  ValueMatrix counts;
  const auto& g = vol.geom;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!in_roi(roi, i, j, k)) continue;
        for (const auto& d : all_26_offsets()) {
          const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
          if (!in_roi(roi, ni, nj, nk)) continue;
          counts[{vol.at(i, j, k), vol.at(ni, nj, nk)}] += 1.0;
        }
      }
  return counts;
}

ValueMatrix glrlm_counts(const LabelVolume& vol, const RoiMask& roi) {
  ValueMatrix counts;
  const auto& g = vol.geom;
  for (const auto& d : half_offsets()) {
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          if (!in_roi(roi, i, j, k)) continue;
          const int level = vol.at(i, j, k);
          // Run start: the previous voxel along d is not the same level
          // inside the ROI.
          const int pi = i - d[0], pj = j - d[1], pk = k - d[2];
          if (in_roi(roi, pi, pj, pk) && vol.at(pi, pj, pk) == level) continue;
          int len = 0;
          int x = i, y = j, z = k;
          while (in_roi(roi, x, y, z) && vol.at(x, y, z) == level) {
            ++len;
            x += d[0];
            y += d[1];
            z += d[2];
          }
          counts[{level, len}] += 1.0;
        }
  }
  return counts;
}

ValueMatrix glszm_counts(const LabelVolume& vol, const RoiMask& roi) {
  ValueMatrix counts;
  const auto& g = vol.geom;
  std::set<std::size_t> visited;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!in_roi(roi, i, j, k)) continue;
        const std::size_t start = g.index(i, j, k);
        if (visited.count(start)) continue;
        const int level = vol.at(i, j, k);
        std::vector<std::array<int, 3>> stack = {{i, j, k}};
        visited.insert(start);
        int size = 0;
        while (!stack.empty()) {
          const auto [x, y, z] = stack.back();
          stack.pop_back();
          ++size;
          for (const auto& d : all_26_offsets()) {
            const int nx = x + d[0], ny = y + d[1], nz = z + d[2];
            if (!in_roi(roi, nx, ny, nz) || vol.at(nx, ny, nz) != level)
              continue;
            const std::size_t id = g.index(nx, ny, nz);
            if (visited.insert(id).second) stack.push_back({nx, ny, nz});
          }
        }
        counts[{level, size}] += 1.0;
      }
  return counts;
}

ValueMatrix gldm_counts(const LabelVolume& vol, const RoiMask& roi) {
  ValueMatrix counts;
  const auto& g = vol.geom;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!in_roi(roi, i, j, k)) continue;
        const int level = vol.at(i, j, k);
        int dep = 0;
        for (const auto& d : all_26_offsets()) {
          const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
          if (in_roi(roi, ni, nj, nk) && vol.at(ni, nj, nk) == level) ++dep;
        }
        counts[{level, dep}] += 1.0;
      }
  return counts;
}

namespace {

double total_of(const ValueMatrix& m) {
  double t = 0.0;
  for (const auto& [key, v] : m) t += v;
  return t;
}

double entropy_bits(const std::map<int, double>& dist) {
  double h = 0.0;
  for (const auto& [k, p] : dist)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

void glcm_features(const LabelVolume& vol, const RoiMask& roi,
                   std::map<std::string, double>& out) {
  const ValueMatrix counts = glcm_counts(vol, roi);
  const double total = total_of(counts);

  const char* names[] = {
      "Autocorrelation", "JointAverage",       "ClusterProminence",
      "ClusterShade",    "ClusterTendency",    "Contrast",
      "Correlation",     "DifferenceAverage",  "DifferenceEntropy",
      "DifferenceVariance", "JointEnergy",     "JointEntropy",
      "Imc1",            "Imc2",               "Idm",
      "Idmn",            "Id",                 "Idn",
      "InverseVariance", "MaximumProbability", "SumEntropy",
      "SumSquares"};
  for (const char* n : names) out[std::string("glcm_") + n] = 0.0;
  if (total <= 0.0) return;  // no co-occurring pairs: zeros by convention

  ValueMatrix p;
  std::map<int, double> px, py, p_sum, p_diff;
  std::set<int> levels;
  for (const auto& [key, c] : counts) {
    const double prob = c / total;
    p[key] = prob;
    px[key.first] += prob;
    py[key.second] += prob;
    p_sum[key.first + key.second] += prob;
    p_diff[std::abs(key.first - key.second)] += prob;
    levels.insert(key.first);
    levels.insert(key.second);
  }
  const double ng = static_cast<double>(levels.size());

  double mu_x = 0.0, mu_y = 0.0;
  for (const auto& [a, q] : px) mu_x += a * q;
  for (const auto& [b, q] : py) mu_y += b * q;
  double sigma_x2 = 0.0, sigma_y2 = 0.0;
  for (const auto& [a, q] : px) sigma_x2 += (a - mu_x) * (a - mu_x) * q;
  for (const auto& [b, q] : py) sigma_y2 += (b - mu_y) * (b - mu_y) * q;

  double autocorr = 0.0, prominence = 0.0, shade = 0.0, tendency = 0.0;
  double contrast = 0.0, corr_num = 0.0, energy = 0.0, joint_entropy = 0.0;
  double idm = 0.0, idmn = 0.0, idf = 0.0, idn = 0.0, inverse_variance = 0.0;
  double max_p = 0.0, joint_average = 0.0;
  for (const auto& [key, q] : p) {
    const double a = key.first, b = key.second;
    autocorr += a * b * q;
    joint_average += a * q;
    const double s = a + b - mu_x - mu_y;
    prominence += s * s * s * s * q;
    shade += s * s * s * q;
    tendency += s * s * q;
    contrast += (a - b) * (a - b) * q;
    corr_num += (a - mu_x) * (b - mu_y) * q;
    energy += q * q;
    if (q > 0.0) joint_entropy -= q * std::log2(q);
    idm += q / (1.0 + (a - b) * (a - b));
    idmn += q / (1.0 + ((a - b) / ng) * ((a - b) / ng));
    idf += q / (1.0 + std::abs(a - b));
    idn += q / (1.0 + std::abs(a - b) / ng);
    if (a != b) inverse_variance += q / ((a - b) * (a - b));
    max_p = std::max(max_p, q);
  }

  double diff_avg = 0.0;
  for (const auto& [k, q] : p_diff) diff_avg += k * q;
  double diff_var = 0.0;
  for (const auto& [k, q] : p_diff)
    diff_var += (k - diff_avg) * (k - diff_avg) * q;

  const double hx = entropy_bits(px);
  const double hy = entropy_bits(py);
  double hxy1 = 0.0, hxy2 = 0.0;
  for (const auto& [key, q] : p)
    if (q > 0.0 && px.at(key.first) * py.at(key.second) > 0.0)
      hxy1 -= q * std::log2(px.at(key.first) * py.at(key.second));
  for (const auto& [a, qa] : px)
    for (const auto& [b, qb] : py)
      if (qa * qb > 0.0) hxy2 -= qa * qb * std::log2(qa * qb);

  out["glcm_Autocorrelation"] = autocorr;
  out["glcm_JointAverage"] = joint_average;
  out["glcm_ClusterProminence"] = prominence;
  out["glcm_ClusterShade"] = shade;
  out["glcm_ClusterTendency"] = tendency;
  out["glcm_Contrast"] = contrast;
  out["glcm_Correlation"] =
      (sigma_x2 > 0.0 && sigma_y2 > 0.0)
          ? corr_num / (std::sqrt(sigma_x2) * std::sqrt(sigma_y2))
          : 0.0;
  out["glcm_DifferenceAverage"] = diff_avg;
  out["glcm_DifferenceEntropy"] = entropy_bits(p_diff);
  out["glcm_DifferenceVariance"] = diff_var;
  out["glcm_JointEnergy"] = energy;
  out["glcm_JointEntropy"] = joint_entropy;
  out["glcm_Imc1"] =
      std::max(hx, hy) > 0.0 ? (joint_entropy - hxy1) / std::max(hx, hy) : 0.0;
  out["glcm_Imc2"] = std::sqrt(
      std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2 - joint_entropy))));
  out["glcm_Idm"] = idm;
  out["glcm_Idmn"] = idmn;
  out["glcm_Id"] = idf;
  out["glcm_Idn"] = idn;
  out["glcm_InverseVariance"] = inverse_variance;
  out["glcm_MaximumProbability"] = max_p;
  out["glcm_SumEntropy"] = entropy_bits(p_sum);
  out["glcm_SumSquares"] = sigma_x2;
}

// Shared scaffolding for the run-length style families: j is the second
// key (run length, zone size, dependence + 1).
struct SizeFamily {
  double n = 0.0;  // total count
  std::map<int, double> by_level, by_j;
  const ValueMatrix* m = nullptr;
  int j_shift = 0;  // GLDM stores dependence d, formulas use j = d + 1

  double emphasis(double (*fg)(double), double (*fj)(double)) const {
    double s = 0.0;
    for (const auto& [key, c] : *m)
      s += c * fg(key.first) * fj(key.second + j_shift);
    return s / n;
  }
};

double one(double) { return 1.0; }
double sq(double v) { return v * v; }
double inv_sq(double v) { return 1.0 / (v * v); }

SizeFamily family_of(const ValueMatrix& m, int j_shift) {
  SizeFamily f;
  f.m = &m;
  f.j_shift = j_shift;
  for (const auto& [key, c] : m) {
    f.n += c;
    f.by_level[key.first] += c;
    f.by_j[key.second + j_shift] += c;
  }
  return f;
}

double nonuniformity(const std::map<int, double>& marginal, double n) {
  double s = 0.0;
  for (const auto& [k, c] : marginal) s += c * c;
  return s / n;
}

double weighted_variance(const SizeFamily& f, bool by_level) {
  double mean = 0.0;
  for (const auto& [key, c] : *f.m) {
    const double v = by_level ? key.first : key.second + f.j_shift;
    mean += v * (c / f.n);
  }
  double var = 0.0;
  for (const auto& [key, c] : *f.m) {
    const double v = by_level ? key.first : key.second + f.j_shift;
    var += (v - mean) * (v - mean) * (c / f.n);
  }
  return var;
}

double matrix_entropy(const SizeFamily& f) {
  double h = 0.0;
  for (const auto& [key, c] : *f.m) {
    const double p = c / f.n;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

void glrlm_features(const LabelVolume& vol, const RoiMask& roi,
                    std::size_t n_voxels, std::map<std::string, double>& out) {
  const ValueMatrix counts = glrlm_counts(vol, roi);
  const SizeFamily f = family_of(counts, 0);
  out["glrlm_ShortRunEmphasis"] = f.emphasis(one, inv_sq);
  out["glrlm_LongRunEmphasis"] = f.emphasis(one, sq);
  out["glrlm_GrayLevelNonUniformity"] = nonuniformity(f.by_level, f.n);
  out["glrlm_GrayLevelNonUniformityNormalized"] =
      nonuniformity(f.by_level, f.n * f.n);
  out["glrlm_RunLengthNonUniformity"] = nonuniformity(f.by_j, f.n);
  out["glrlm_RunLengthNonUniformityNormalized"] =
      nonuniformity(f.by_j, f.n * f.n);
  out["glrlm_RunPercentage"] = f.n / (static_cast<double>(n_voxels) * 13.0);
  out["glrlm_GrayLevelVariance"] = weighted_variance(f, true);
  out["glrlm_RunVariance"] = weighted_variance(f, false);
  out["glrlm_RunEntropy"] = matrix_entropy(f);
  out["glrlm_LowGrayLevelRunEmphasis"] = f.emphasis(inv_sq, one);
  out["glrlm_HighGrayLevelRunEmphasis"] = f.emphasis(sq, one);
  out["glrlm_ShortRunLowGrayLevelEmphasis"] = f.emphasis(inv_sq, inv_sq);
  out["glrlm_ShortRunHighGrayLevelEmphasis"] = f.emphasis(sq, inv_sq);
  out["glrlm_LongRunLowGrayLevelEmphasis"] = f.emphasis(inv_sq, sq);
  out["glrlm_LongRunHighGrayLevelEmphasis"] = f.emphasis(sq, sq);
}

void glszm_features(const LabelVolume& vol, const RoiMask& roi,
                    std::size_t n_voxels, std::map<std::string, double>& out) {
  const ValueMatrix counts = glszm_counts(vol, roi);
  const SizeFamily f = family_of(counts, 0);
  out["glszm_SmallAreaEmphasis"] = f.emphasis(one, inv_sq);
  out["glszm_LargeAreaEmphasis"] = f.emphasis(one, sq);
  out["glszm_GrayLevelNonUniformity"] = nonuniformity(f.by_level, f.n);
  out["glszm_GrayLevelNonUniformityNormalized"] =
      nonuniformity(f.by_level, f.n * f.n);
  out["glszm_SizeZoneNonUniformity"] = nonuniformity(f.by_j, f.n);
  out["glszm_SizeZoneNonUniformityNormalized"] =
      nonuniformity(f.by_j, f.n * f.n);
  out["glszm_ZonePercentage"] = f.n / static_cast<double>(n_voxels);
  out["glszm_GrayLevelVariance"] = weighted_variance(f, true);
  out["glszm_ZoneVariance"] = weighted_variance(f, false);
  out["glszm_ZoneEntropy"] = matrix_entropy(f);
  out["glszm_LowGrayLevelZoneEmphasis"] = f.emphasis(inv_sq, one);
  out["glszm_HighGrayLevelZoneEmphasis"] = f.emphasis(sq, one);
  out["glszm_SmallAreaLowGrayLevelEmphasis"] = f.emphasis(inv_sq, inv_sq);
  out["glszm_SmallAreaHighGrayLevelEmphasis"] = f.emphasis(sq, inv_sq);
  out["glszm_LargeAreaLowGrayLevelEmphasis"] = f.emphasis(inv_sq, sq);
  out["glszm_LargeAreaHighGrayLevelEmphasis"] = f.emphasis(sq, sq);
}

void gldm_features(const LabelVolume& vol, const RoiMask& roi,
                   std::map<std::string, double>& out) {
  const ValueMatrix counts = gldm_counts(vol, roi);
  const SizeFamily f = family_of(counts, 1);  // j = dependence + 1
  out["gldm_SmallDependenceEmphasis"] = f.emphasis(one, inv_sq);
  out["gldm_LargeDependenceEmphasis"] = f.emphasis(one, sq);
  out["gldm_GrayLevelNonUniformity"] = nonuniformity(f.by_level, f.n);
  out["gldm_DependenceNonUniformity"] = nonuniformity(f.by_j, f.n);
  out["gldm_DependenceNonUniformityNormalized"] =
      nonuniformity(f.by_j, f.n * f.n);
  out["gldm_GrayLevelVariance"] = weighted_variance(f, true);
  out["gldm_DependenceVariance"] = weighted_variance(f, false);
  out["gldm_DependenceEntropy"] = matrix_entropy(f);
  out["gldm_LowGrayLevelEmphasis"] = f.emphasis(inv_sq, one);
  out["gldm_HighGrayLevelEmphasis"] = f.emphasis(sq, one);
  out["gldm_SmallDependenceLowGrayLevelEmphasis"] = f.emphasis(inv_sq, inv_sq);
  out["gldm_SmallDependenceHighGrayLevelEmphasis"] = f.emphasis(sq, inv_sq);
  out["gldm_LargeDependenceLowGrayLevelEmphasis"] = f.emphasis(inv_sq, sq);
  out["gldm_LargeDependenceHighGrayLevelEmphasis"] = f.emphasis(sq, sq);
}

}  // namespace

std::map<std::string, double> texture_features(const LabelVolume& vol,
                                               const RoiMask& roi) {
  std::map<std::string, double> out;
  const std::size_t n_voxels = roi.count();
  glcm_features(vol, roi, out);
  glrlm_features(vol, roi, n_voxels, out);
  glszm_features(vol, roi, n_voxels, out);
  gldm_features(vol, roi, out);
  return out;
}

}  // namespace gliomics::oracle
