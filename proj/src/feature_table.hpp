// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace gliomics {

enum class Resection { GTR, STR, NA };

const char* resection_name(Resection r);
Resection resection_from_name(const std::string& name);

// Per-subject feature vectors with survival targets. Age, survival and
// resection status live beside the feature matrix; "age" can still be named
// as a model predictor.
struct FeatureTable {
  std::vector<std::string> subjects;
  std::vector<std::string> feature_names;
  Matrix values;  // subjects x features
  std::vector<double> survival_days;
  std::vector<double> age;
  std::vector<Resection> resection_status;

  std::size_t n_subjects() const { return subjects.size(); }
  std::size_t n_features() const { return feature_names.size(); }

  // Throws a config error when the name is unknown.
  std::size_t feature_index(const std::string& name) const;
  bool has_feature(const std::string& name) const;

  // Predictor columns by name; "age" resolves to the age column.
  Matrix design_matrix(std::span<const std::string> predictors) const;

  FeatureTable take_rows(std::span<const std::size_t> idx) const;
  FeatureTable take_features(std::span<const std::string> names) const;

  // Internal consistency: matching lengths, unique names, finite values.
  void validate() const;
};

// CSV persistence. Layout: a "# gliomics.features.v1" schema line, then a
// header "subject_id,age,survival_days,resection_status,<feature...>".
FeatureTable read_feature_table(const std::string& path);
void write_feature_table(const FeatureTable& table, const std::string& path);

FeatureTable filter_gtr(const FeatureTable& table);

}  // namespace gliomics
