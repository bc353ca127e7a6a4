// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "texture.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "errors.hpp"

namespace gliomics {

namespace {

std::vector<int> roi_gray_levels(const LabelVolume& vol, const RoiMask& roi) {
  std::set<int> levels;
  for (std::size_t i = 0; i < vol.data.size(); ++i)
    if (roi.data[i]) levels.insert(vol.data[i]);
  return {levels.begin(), levels.end()};
}

std::size_t level_row(const std::vector<int>& levels, int value) {
  return static_cast<std::size_t>(
      std::lower_bound(levels.begin(), levels.end(), value) - levels.begin());
}

void require_roi(const RoiMask& roi, const LabelVolume& vol) {
  if (!roi.geom.same_grid(vol.geom))
    fail(ErrorKind::shape, "ROI mask geometry does not match volume");
  if (roi.count() == 0)
    fail(ErrorKind::empty_roi,
         std::string("texture: empty ROI ") + roi_name(roi.kind));
}

// Trims unused trailing columns (zone sizes / run lengths above the maximum
// realized value).
void trim_columns(GrayLevelMatrix& m) {
  std::size_t last = 0;
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c)
      if (m.at(r, c) != 0.0 && c + 1 > last) last = c + 1;
  if (last == 0) last = 1;
  if (last == m.cols) return;
  GrayLevelMatrix t = m;
  t.cols = last;
  t.cells.assign(m.rows * last, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < last; ++c) t.at(r, c) = m.at(r, c);
  m = std::move(t);
}

double log2_safe(double p) { return std::log2(p); }

// Order-canonical reductions: sorting the terms first makes the result
// independent of gray-level ordering, so label permutations leave the
// level-agnostic features bitwise unchanged.
double entropy_canonical(std::vector<double>& probs) {
  std::sort(probs.begin(), probs.end());
  double h = 0.0;
  for (double p : probs) h -= p * log2_safe(p);
  return h;
}

double energy_canonical(std::vector<double>& probs) {
  std::sort(probs.begin(), probs.end());
  double e = 0.0;
  for (double p : probs) e += p * p;
  return e;
}

}  // namespace

double GrayLevelMatrix::total() const {
  return std::accumulate(cells.begin(), cells.end(), 0.0);
}

const std::array<std::array<int, 3>, 13>& unique_directions() {
  static const std::array<std::array<int, 3>, 13> kDirections = [] {
    std::array<std::array<int, 3>, 13> dirs{};
    std::size_t n = 0;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const bool positive =
              dz > 0 || (dz == 0 && dy > 0) || (dz == 0 && dy == 0 && dx > 0);
          if (positive) dirs[n++] = {dx, dy, dz};
        }
    return dirs;
  }();
  return kDirections;
}

GrayLevelMatrix build_glcm(const LabelVolume& vol, const RoiMask& roi) {
  require_roi(roi, vol);
  const auto& g = vol.geom;
  GrayLevelMatrix m;
  m.family = MatrixFamily::GLCM;
  m.gray_levels = roi_gray_levels(vol, roi);
  m.rows = m.cols = m.gray_levels.size();
  m.cells.assign(m.rows * m.cols, 0.0);

  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!roi.at(i, j, k)) continue;
        const std::size_t a = level_row(m.gray_levels, vol.at(i, j, k));
        for (const auto& d : unique_directions()) {
          const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
          if (!g.contains(ni, nj, nk) || !roi.at(ni, nj, nk)) continue;
          const std::size_t b = level_row(m.gray_levels, vol.at(ni, nj, nk));
          m.at(a, b) += 1.0;
        }
      }

  // Symmetrize, then normalize to probabilities.
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = r + 1; c < m.cols; ++c) {
      const double s = m.at(r, c) + m.at(c, r);
      m.at(r, c) = s;
      m.at(c, r) = s;
    }
  for (std::size_t r = 0; r < m.rows; ++r) m.at(r, r) *= 2.0;

  const double total = m.total();
  if (total > 0.0)
    for (double& v : m.cells) v /= total;
  return m;
}

GrayLevelMatrix build_glrlm(const LabelVolume& vol, const RoiMask& roi) {
  require_roi(roi, vol);
  const auto& g = vol.geom;
  GrayLevelMatrix m;
  m.family = MatrixFamily::GLRLM;
  m.gray_levels = roi_gray_levels(vol, roi);
  m.rows = m.gray_levels.size();
  m.cols = static_cast<std::size_t>(std::max({g.nx, g.ny, g.nz}));
  m.cells.assign(m.rows * m.cols, 0.0);

  for (const auto& d : unique_directions()) {
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          // Line starts: the previous voxel along d falls outside the grid.
          if (g.contains(i - d[0], j - d[1], k - d[2])) continue;
          int run_level = -1;
          std::size_t run_len = 0;
          for (int x = i, y = j, z = k; g.contains(x, y, z);
               x += d[0], y += d[1], z += d[2]) {
            const bool in_roi = roi.at(x, y, z);
            const int level = in_roi ? vol.at(x, y, z) : -1;
            if (in_roi && level == run_level) {
              ++run_len;
            } else {
              if (run_level >= 0)
                m.at(level_row(m.gray_levels, run_level), run_len - 1) += 1.0;
              run_level = level;
              run_len = in_roi ? 1 : 0;
            }
          }
          if (run_level >= 0)
            m.at(level_row(m.gray_levels, run_level), run_len - 1) += 1.0;
        }
  }
  trim_columns(m);
  return m;
}

GrayLevelMatrix build_glszm(const LabelVolume& vol, const RoiMask& roi) {
  require_roi(roi, vol);
  const auto& g = vol.geom;
  const std::vector<int>& levels = roi_gray_levels(vol, roi);

  std::vector<std::uint8_t> visited(vol.data.size(), 0);
  std::map<std::pair<std::size_t, std::size_t>, double> zone_counts;
  std::size_t max_size = 1;

  std::vector<std::size_t> stack;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t start = g.index(i, j, k);
        if (!roi.data[start] || visited[start]) continue;
        const std::uint8_t level = vol.data[start];
        std::size_t size = 0;
        stack.clear();
        stack.push_back(start);
        visited[start] = 1;
        while (!stack.empty()) {
          const std::size_t v = stack.back();
          stack.pop_back();
          ++size;
          const int vi = static_cast<int>(v % g.nx);
          const int vj = static_cast<int>((v / g.nx) % g.ny);
          const int vk =
              static_cast<int>(v / (static_cast<std::size_t>(g.nx) * g.ny));
          for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                const int ni = vi + dx, nj = vj + dy, nk = vk + dz;
                if (!g.contains(ni, nj, nk)) continue;
                const std::size_t u = g.index(ni, nj, nk);
                if (roi.data[u] && !visited[u] && vol.data[u] == level) {
                  visited[u] = 1;
                  stack.push_back(u);
                }
              }
        }
        zone_counts[{level_row(levels, level), size - 1}] += 1.0;
        max_size = std::max(max_size, size);
      }

  GrayLevelMatrix m;
  m.family = MatrixFamily::GLSZM;
  m.gray_levels = levels;
  m.rows = levels.size();
  m.cols = max_size;
  m.cells.assign(m.rows * m.cols, 0.0);
  for (const auto& [key, count] : zone_counts) m.at(key.first, key.second) = count;
  return m;
}

GrayLevelMatrix build_gldm(const LabelVolume& vol, const RoiMask& roi) {
  require_roi(roi, vol);
  const auto& g = vol.geom;
  GrayLevelMatrix m;
  m.family = MatrixFamily::GLDM;
  m.gray_levels = roi_gray_levels(vol, roi);
  m.rows = m.gray_levels.size();
  m.cols = 27;  // dependence counts 0..26
  m.cells.assign(m.rows * m.cols, 0.0);

  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!roi.at(i, j, k)) continue;
        const std::uint8_t level = vol.at(i, j, k);
        std::size_t dependence = 0;
        for (int dz = -1; dz <= 1; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0 && dz == 0) continue;
              const int ni = i + dx, nj = j + dy, nk = k + dz;
              if (g.contains(ni, nj, nk) && roi.at(ni, nj, nk) &&
                  vol.at(ni, nj, nk) == level)
                ++dependence;
            }
        m.at(level_row(m.gray_levels, level), dependence) += 1.0;
      }
  trim_columns(m);
  return m;
}

GlcmResult glcm_features(const GrayLevelMatrix& m) {
  GlcmResult out;
  auto& f = out.values;
  const std::size_t ng = m.rows;
  const double ng_d = static_cast<double>(ng);
  if (m.total() <= 0.0) {
    out.degenerate = true;  // no co-occurring pairs at all
    return out;
  }

  std::vector<double> px(ng, 0.0);
  for (std::size_t r = 0; r < ng; ++r)
    for (std::size_t c = 0; c < ng; ++c) px[r] += m.at(r, c);

  double mu = 0.0;
  for (std::size_t r = 0; r < ng; ++r) mu += m.gray_levels[r] * px[r];
  double var = 0.0;
  for (std::size_t r = 0; r < ng; ++r) {
    const double d = m.gray_levels[r] - mu;
    var += d * d * px[r];
  }

  std::map<int, double> p_sum, p_diff;
  for (std::size_t r = 0; r < ng; ++r)
    for (std::size_t c = 0; c < ng; ++c) {
      const double p = m.at(r, c);
      if (p <= 0.0) continue;
      p_sum[m.gray_levels[r] + m.gray_levels[c]] += p;
      p_diff[std::abs(m.gray_levels[r] - m.gray_levels[c])] += p;
    }

  double hx = 0.0;
  for (double p : px)
    if (p > 0.0) hx -= p * log2_safe(p);
  std::vector<double> cell_probs;
  cell_probs.reserve(ng * ng);
  double hxy1 = 0.0;
  for (std::size_t r = 0; r < ng; ++r)
    for (std::size_t c = 0; c < ng; ++c) {
      const double p = m.at(r, c);
      if (p <= 0.0) continue;
      cell_probs.push_back(p);
      hxy1 -= p * log2_safe(px[r] * px[c]);
    }
  std::vector<double> cell_probs_copy = cell_probs;
  const double hxy = entropy_canonical(cell_probs);
  const double energy = energy_canonical(cell_probs_copy);
  double hxy2 = 0.0;
  for (std::size_t r = 0; r < ng; ++r)
    for (std::size_t c = 0; c < ng; ++c) {
      const double q = px[r] * px[c];
      if (q > 0.0) hxy2 -= q * log2_safe(q);
    }

  double autocorr = 0.0, prom = 0.0, shade = 0.0, tend = 0.0, contrast = 0.0;
  double idm = 0.0, idmn = 0.0, id = 0.0, idn = 0.0;
  double inv_var = 0.0, max_p = 0.0;
  for (std::size_t r = 0; r < ng; ++r)
    for (std::size_t c = 0; c < ng; ++c) {
      const double p = m.at(r, c);
      const double gi = m.gray_levels[r], gj = m.gray_levels[c];
      const double s = gi + gj - 2.0 * mu;
      const double d = gi - gj;
      autocorr += p * gi * gj;
      prom += p * s * s * s * s;
      shade += p * s * s * s;
      tend += p * s * s;
      contrast += p * d * d;
      idm += p / (1.0 + d * d);
      idmn += p / (1.0 + (d / ng_d) * (d / ng_d));
      id += p / (1.0 + std::abs(d));
      idn += p / (1.0 + std::abs(d) / ng_d);
      if (r != c) inv_var += p / (d * d);
      max_p = std::max(max_p, p);
    }

  double diff_avg = 0.0, diff_ent = 0.0;
  for (const auto& [k, p] : p_diff) diff_avg += k * p;
  for (const auto& [k, p] : p_diff)
    if (p > 0.0) diff_ent -= p * log2_safe(p);
  double diff_var = 0.0;
  for (const auto& [k, p] : p_diff) diff_var += (k - diff_avg) * (k - diff_avg) * p;
  double sum_ent = 0.0;
  for (const auto& [k, p] : p_sum)
    if (p > 0.0) sum_ent -= p * log2_safe(p);

  double correlation = 0.0;
  if (var > 0.0) {
    correlation = (autocorr - mu * mu) / var;
  } else {
    out.degenerate = true;  // single gray level: 0 by convention
  }
  double imc1 = 0.0;
  if (hx > 0.0) {
    imc1 = (hxy - hxy1) / hx;  // HX == HY for symmetric matrices
  } else {
    out.degenerate = true;  // all mass on one gray level: 0 by convention
  }
  const double imc2 = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2 - hxy))));

  f[0] = autocorr;
  f[1] = mu;
  f[2] = prom;
  f[3] = shade;
  f[4] = tend;
  f[5] = contrast;
  f[6] = correlation;
  f[7] = diff_avg;
  f[8] = diff_ent;
  f[9] = diff_var;
  f[10] = energy;
  f[11] = hxy;
  f[12] = imc1;
  f[13] = imc2;
  f[14] = idm;
  f[15] = idmn;
  f[16] = id;
  f[17] = idn;
  f[18] = inv_var;
  f[19] = max_p;
  f[20] = sum_ent;
  f[21] = var;
  return out;
}

namespace {

// Shared accumulator for the run-length style families. Column value for
// cell (r, c) is c + 1 (run length, zone size, or dependence + 1).
struct SizeMatrixStats {
  double total = 0.0;
  std::vector<double> row_sum, col_sum;
  double sre = 0.0, lre = 0.0;       // 1/j^2 and j^2 emphasis
  double lgl = 0.0, hgl = 0.0;       // 1/g^2 and g^2 emphasis
  double slgl = 0.0, shgl = 0.0;     // small x low/high
  double llgl = 0.0, lhgl = 0.0;     // large x low/high
  double glv = 0.0, jv = 0.0;        // gray-level and column-value variance
  double entropy = 0.0;
};

SizeMatrixStats size_matrix_stats(const GrayLevelMatrix& m) {
  SizeMatrixStats s;
  s.row_sum.assign(m.rows, 0.0);
  s.col_sum.assign(m.cols, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double v = m.at(r, c);
      s.total += v;
      s.row_sum[r] += v;
      s.col_sum[c] += v;
    }
  if (s.total <= 0.0) return s;

  std::vector<double> probs;
  double mu_g = 0.0, mu_j = 0.0;
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double v = m.at(r, c);
      if (v == 0.0) continue;
      const double p = v / s.total;
      const double gl = m.gray_levels[r];
      const double j = static_cast<double>(c + 1);
      s.sre += v / (j * j);
      s.lre += v * j * j;
      s.lgl += v / (gl * gl);
      s.hgl += v * gl * gl;
      s.slgl += v / (gl * gl * j * j);
      s.shgl += v * gl * gl / (j * j);
      s.llgl += v * j * j / (gl * gl);
      s.lhgl += v * gl * gl * j * j;
      mu_g += p * gl;
      mu_j += p * j;
      probs.push_back(p);
    }
  s.entropy = entropy_canonical(probs);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double v = m.at(r, c);
      if (v == 0.0) continue;
      const double p = v / s.total;
      const double dg = m.gray_levels[r] - mu_g;
      const double dj = static_cast<double>(c + 1) - mu_j;
      s.glv += p * dg * dg;
      s.jv += p * dj * dj;
    }
  return s;
}

double sum_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

std::array<double, 16> glrlm_features(const GrayLevelMatrix& m,
                                      std::size_t n_voxels) {
  const SizeMatrixStats s = size_matrix_stats(m);
  std::array<double, 16> f{};
  if (s.total <= 0.0) return f;
  const double nr = s.total;
  f[0] = s.sre / nr;
  f[1] = s.lre / nr;
  f[2] = sum_sq(s.row_sum) / nr;
  f[3] = sum_sq(s.row_sum) / (nr * nr);
  f[4] = sum_sq(s.col_sum) / nr;
  f[5] = sum_sq(s.col_sum) / (nr * nr);
  // Runs are accumulated over the 13 directions, so the voxel budget is
  // n_voxels per direction.
  f[6] = nr / (static_cast<double>(n_voxels) * 13.0);
  f[7] = s.glv;
  f[8] = s.jv;
  f[9] = s.entropy;
  f[10] = s.lgl / nr;
  f[11] = s.hgl / nr;
  f[12] = s.slgl / nr;
  f[13] = s.shgl / nr;
  f[14] = s.llgl / nr;
  f[15] = s.lhgl / nr;
  return f;
}

std::array<double, 16> glszm_features(const GrayLevelMatrix& m,
                                      std::size_t n_voxels) {
  const SizeMatrixStats s = size_matrix_stats(m);
  std::array<double, 16> f{};
  if (s.total <= 0.0) return f;
  const double nz = s.total;
  f[0] = s.sre / nz;
  f[1] = s.lre / nz;
  f[2] = sum_sq(s.row_sum) / nz;
  f[3] = sum_sq(s.row_sum) / (nz * nz);
  f[4] = sum_sq(s.col_sum) / nz;
  f[5] = sum_sq(s.col_sum) / (nz * nz);
  f[6] = nz / static_cast<double>(n_voxels);
  f[7] = s.glv;
  f[8] = s.jv;
  f[9] = s.entropy;
  f[10] = s.lgl / nz;
  f[11] = s.hgl / nz;
  f[12] = s.slgl / nz;
  f[13] = s.shgl / nz;
  f[14] = s.llgl / nz;
  f[15] = s.lhgl / nz;
  return f;
}

std::array<double, 14> gldm_features(const GrayLevelMatrix& m) {
  const SizeMatrixStats s = size_matrix_stats(m);
  std::array<double, 14> f{};
  if (s.total <= 0.0) return f;
  const double nz = s.total;
  f[0] = s.sre / nz;
  f[1] = s.lre / nz;
  f[2] = sum_sq(s.row_sum) / nz;
  f[3] = sum_sq(s.col_sum) / nz;
  f[4] = sum_sq(s.col_sum) / (nz * nz);
  f[5] = s.glv;
  f[6] = s.jv;
  f[7] = s.entropy;
  f[8] = s.lgl / nz;
  f[9] = s.hgl / nz;
  f[10] = s.slgl / nz;
  f[11] = s.shgl / nz;
  f[12] = s.llgl / nz;
  f[13] = s.lhgl / nz;
  return f;
}

std::array<double, 68> TextureFeatures::as_array() const {
  std::array<double, 68> out{};
  std::size_t n = 0;
  for (double v : glcm) out[n++] = v;
  for (double v : glrlm) out[n++] = v;
  for (double v : glszm) out[n++] = v;
  for (double v : gldm) out[n++] = v;
  return out;
}

const std::array<std::string, 68>& TextureFeatures::names() {
  static const std::array<std::string, 68> kNames = [] {
    const char* glcm[22] = {
        "Autocorrelation", "JointAverage",      "ClusterProminence",
        "ClusterShade",    "ClusterTendency",   "Contrast",
        "Correlation",     "DifferenceAverage", "DifferenceEntropy",
        "DifferenceVariance", "JointEnergy",    "JointEntropy",
        "Imc1",            "Imc2",              "Idm",
        "Idmn",            "Id",                "Idn",
        "InverseVariance", "MaximumProbability", "SumEntropy",
        "SumSquares"};
    const char* glrlm[16] = {
        "ShortRunEmphasis",
        "LongRunEmphasis",
        "GrayLevelNonUniformity",
        "GrayLevelNonUniformityNormalized",
        "RunLengthNonUniformity",
        "RunLengthNonUniformityNormalized",
        "RunPercentage",
        "GrayLevelVariance",
        "RunVariance",
        "RunEntropy",
        "LowGrayLevelRunEmphasis",
        "HighGrayLevelRunEmphasis",
        "ShortRunLowGrayLevelEmphasis",
        "ShortRunHighGrayLevelEmphasis",
        "LongRunLowGrayLevelEmphasis",
        "LongRunHighGrayLevelEmphasis"};
    const char* glszm[16] = {
        "SmallAreaEmphasis",
        "LargeAreaEmphasis",
        "GrayLevelNonUniformity",
        "GrayLevelNonUniformityNormalized",
        "SizeZoneNonUniformity",
        "SizeZoneNonUniformityNormalized",
        "ZonePercentage",
        "GrayLevelVariance",
        "ZoneVariance",
        "ZoneEntropy",
        "LowGrayLevelZoneEmphasis",
        "HighGrayLevelZoneEmphasis",
        "SmallAreaLowGrayLevelEmphasis",
        "SmallAreaHighGrayLevelEmphasis",
        "LargeAreaLowGrayLevelEmphasis",
        "LargeAreaHighGrayLevelEmphasis"};
    const char* gldm[14] = {
        "SmallDependenceEmphasis",
        "LargeDependenceEmphasis",
        "GrayLevelNonUniformity",
        "DependenceNonUniformity",
        "DependenceNonUniformityNormalized",
        "GrayLevelVariance",
        "DependenceVariance",
        "DependenceEntropy",
        "LowGrayLevelEmphasis",
        "HighGrayLevelEmphasis",
        "SmallDependenceLowGrayLevelEmphasis",
        "SmallDependenceHighGrayLevelEmphasis",
        "LargeDependenceLowGrayLevelEmphasis",
        "LargeDependenceHighGrayLevelEmphasis"};
    std::array<std::string, 68> names;
    std::size_t n = 0;
    for (const char* s : glcm) names[n++] = std::string("glcm_") + s;
    for (const char* s : glrlm) names[n++] = std::string("glrlm_") + s;
    for (const char* s : glszm) names[n++] = std::string("glszm_") + s;
    for (const char* s : gldm) names[n++] = std::string("gldm_") + s;
    return names;
  }();
  return kNames;
}

TextureFeatures texture_features(const LabelVolume& vol, const RoiMask& roi) {
  const std::size_t n_voxels = roi.count();
  if (n_voxels == 0)
    fail(ErrorKind::empty_roi,
         std::string("texture: empty ROI ") + roi_name(roi.kind));
  if (n_voxels < 2)
    fail(ErrorKind::degenerate,
         "texture features require a ROI of at least 2 voxels");

  TextureFeatures out;
  const GlcmResult glcm = glcm_features(build_glcm(vol, roi));
  out.glcm = glcm.values;
  out.glrlm = glrlm_features(build_glrlm(vol, roi), n_voxels);
  out.glszm = glszm_features(build_glszm(vol, roi), n_voxels);
  out.gldm = gldm_features(build_gldm(vol, roi));
  out.degenerate = glcm.degenerate;
  return out;
}

}  // namespace gliomics
