// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "text_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace gliomics {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return {buf, ptr};
}

double parse_double(const std::string& token, const std::string& context) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r'))
    --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value))
    fail(ErrorKind::validation,
         "cannot parse '" + token + "' as a finite number (" + context + ")");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, "read failed: " + path);
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open file for writing: " + path);
  out << content;
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

}  // namespace gliomics
