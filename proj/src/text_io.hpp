// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace gliomics {

// Shortest round-trip decimal representation; deterministic across runs.
std::string format_double(double v);

// Strict finite-double parse of a whole token; throws a validation error.
double parse_double(const std::string& token, const std::string& context);

std::vector<std::string> split_csv_line(const std::string& line);

std::string read_text_file(const std::string& path);

// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gliomics
