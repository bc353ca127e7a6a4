// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "feature_table.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "text_io.hpp"

namespace gliomics {

namespace {
constexpr const char* kSchemaLine = "# gliomics.features.v1";
}

const char* resection_name(Resection r) {
  switch (r) {
    case Resection::GTR: return "GTR";
    case Resection::STR: return "STR";
    case Resection::NA: return "NA";
  }
  return "NA";
}

Resection resection_from_name(const std::string& name) {
  if (name == "GTR") return Resection::GTR;
  if (name == "STR") return Resection::STR;
  if (name == "NA" || name.empty()) return Resection::NA;
  fail(ErrorKind::validation, "unknown resection status: " + name);
}

std::size_t FeatureTable::feature_index(const std::string& name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end())
    fail(ErrorKind::config, "unknown feature: " + name);
  return static_cast<std::size_t>(it - feature_names.begin());
}

bool FeatureTable::has_feature(const std::string& name) const {
  return std::find(feature_names.begin(), feature_names.end(), name) !=
         feature_names.end();
}

Matrix FeatureTable::design_matrix(
    std::span<const std::string> predictors) const {
  Matrix x(n_subjects(), predictors.size());
  for (std::size_t c = 0; c < predictors.size(); ++c) {
    if (predictors[c] == "age") {
      for (std::size_t r = 0; r < n_subjects(); ++r) x.at(r, c) = age[r];
    } else {
      const std::size_t f = feature_index(predictors[c]);
      for (std::size_t r = 0; r < n_subjects(); ++r)
        x.at(r, c) = values.at(r, f);
    }
  }
  return x;
}

FeatureTable FeatureTable::take_rows(std::span<const std::size_t> idx) const {
  FeatureTable out;
  out.feature_names = feature_names;
  out.values = values.take_rows(idx);
  out.subjects.reserve(idx.size());
  for (std::size_t r : idx) {
    out.subjects.push_back(subjects[r]);
    out.survival_days.push_back(survival_days[r]);
    out.age.push_back(age[r]);
    out.resection_status.push_back(resection_status[r]);
  }
  return out;
}

FeatureTable FeatureTable::take_features(
    std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(feature_index(n));
  FeatureTable out;
  out.subjects = subjects;
  out.survival_days = survival_days;
  out.age = age;
  out.resection_status = resection_status;
  out.feature_names.assign(names.begin(), names.end());
  out.values = values.take_cols(idx);
  return out;
}

void FeatureTable::validate() const {
  const std::size_t n = subjects.size();
  if (survival_days.size() != n || age.size() != n ||
      resection_status.size() != n || values.rows != n)
    fail(ErrorKind::validation, "feature table columns have unequal lengths");
  if (values.cols != feature_names.size())
    fail(ErrorKind::validation, "feature matrix width != number of names");
  std::set<std::string> unique(feature_names.begin(), feature_names.end());
  if (unique.size() != feature_names.size())
    fail(ErrorKind::validation, "feature names are not unique");
  for (double v : values.data)
    if (!std::isfinite(v))
      fail(ErrorKind::validation, "feature table contains non-finite values");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(survival_days[i]) || !std::isfinite(age[i]))
      fail(ErrorKind::validation,
           "non-finite age or survival for subject " + subjects[i]);
}

FeatureTable read_feature_table(const std::string& path) {
  const std::string content = read_text_file(path);
  std::istringstream in(content);
  std::string line;

  FeatureTable table;
  bool header_seen = false;
  std::size_t n_cols = 0;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() < 5 || fields[0] != "subject_id" ||
          fields[1] != "age" || fields[2] != "survival_days" ||
          fields[3] != "resection_status")
        fail(ErrorKind::format,
             "feature table header must start with "
             "subject_id,age,survival_days,resection_status: " +
                 path);
      table.feature_names.assign(fields.begin() + 4, fields.end());
      n_cols = fields.size();
      header_seen = true;
      continue;
    }
    if (fields.size() != n_cols)
      fail(ErrorKind::format,
           "row for '" + fields[0] + "' has " + std::to_string(fields.size()) +
               " fields, expected " + std::to_string(n_cols) + ": " + path);
    table.subjects.push_back(fields[0]);
    table.age.push_back(parse_double(fields[1], "age of " + fields[0]));
    table.survival_days.push_back(
        parse_double(fields[2], "survival_days of " + fields[0]));
    table.resection_status.push_back(resection_from_name(fields[3]));
    for (std::size_t c = 4; c < fields.size(); ++c)
      table.values.data.push_back(
          parse_double(fields[c], table.feature_names[c - 4] + " of " + fields[0]));
  }
  if (!header_seen) fail(ErrorKind::format, "feature table has no header: " + path);

  table.values.rows = table.subjects.size();
  table.values.cols = table.feature_names.size();
  table.validate();
  return table;
}

void write_feature_table(const FeatureTable& table, const std::string& path) {
  table.validate();
  std::ostringstream os;
  os << kSchemaLine << '\n';
  os << "subject_id,age,survival_days,resection_status";
  for (const auto& name : table.feature_names) os << ',' << name;
  os << '\n';
  for (std::size_t r = 0; r < table.n_subjects(); ++r) {
    os << table.subjects[r] << ',' << format_double(table.age[r]) << ','
       << format_double(table.survival_days[r]) << ','
       << resection_name(table.resection_status[r]);
    for (std::size_t c = 0; c < table.n_features(); ++c)
      os << ',' << format_double(table.values.at(r, c));
    os << '\n';
  }
  write_text_file(path, os.str());
}

FeatureTable filter_gtr(const FeatureTable& table) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < table.n_subjects(); ++r)
    if (table.resection_status[r] == Resection::GTR) keep.push_back(r);
  return table.take_rows(keep);
}

}  // namespace gliomics
