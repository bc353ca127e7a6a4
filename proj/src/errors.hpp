// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gliomics {

enum class ErrorKind {
  validation,       // bad input values (labels, negative days, NaN, ...)
  format,           // malformed file content
  unsupported,      // recognised but unsupported format variant
  io,               // filesystem / OS level failure
  config,           // inconsistent parameters or flags
  degenerate,       // input too degenerate for the requested computation
  empty_roi,        // operation requires a nonempty ROI
  iteration_limit,  // solver did not converge within its budget
  shape,            // dimension / geometry mismatch
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace gliomics
