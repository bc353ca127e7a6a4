// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gliomics {

// Dense row-major matrix of doubles; the design-matrix currency of the
// regression models.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }

  Matrix take_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols);
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = at(idx[r], c);
    return out;
  }

  Matrix take_cols(std::span<const std::size_t> idx) const {
    Matrix out(rows, idx.size());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < idx.size(); ++c)
        out.at(r, c) = at(r, idx[c]);
    return out;
  }
};

}  // namespace gliomics
