// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "feature_table.hpp"
#include "linear_model.hpp"
#include "random_forest.hpp"
#include "selection.hpp"
#include "svr.hpp"

#include "json.hpp"

namespace gliomics {

enum class ModelKind { linear, forest, svr };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

// How a prognostic model is built: which regressor, which predictor columns
// ("age" resolves to the age column), and optionally a feature-selection
// stage that derives the predictors from the training rows.
struct ModelSpec {
  ModelKind kind = ModelKind::linear;
  std::vector<std::string> predictors;
  ForestParams forest;
  SvrParams svr;
  bool run_selection = false;     // derive predictors via select_features
  bool append_age = false;        // add "age" after selection
  SelectParams selection;
};

// The three stock prognostic models: "baseline" (linear on age), "radiomics"
// (forest on selected features + age), "invasiveness" (SVR on age + RIC).
ModelSpec model_spec_preset(const std::string& name);

ModelSpec model_spec_from_json(const nlohmann::json& j);
nlohmann::json model_spec_to_json(const ModelSpec& spec);

nlohmann::json forest_params_to_json(const ForestParams& p);
ForestParams forest_params_from_json(const nlohmann::json& j);
nlohmann::json svr_params_to_json(const SvrParams& p);
SvrParams svr_params_from_json(const nlohmann::json& j);
nlohmann::json select_params_to_json(const SelectParams& p);
SelectParams select_params_from_json(const nlohmann::json& j);

struct TrainedModel {
  ModelKind kind = ModelKind::linear;
  std::vector<std::string> predictors;
  std::variant<LinearModel, ForestModel, SvrModel> model;
  // Populated when training ran feature selection.
  bool has_selection_report = false;
  SelectionReport selection_report;
};

TrainedModel train_model(const FeatureTable& table, const ModelSpec& spec,
                         std::uint64_t seed, int threads = 1);

std::vector<double> predict(const TrainedModel& model,
                            const FeatureTable& table);

// Versioned JSON document with the model kind, parameters, coefficients /
// trees / support vectors and standardization stats.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

nlohmann::json selection_report_to_json(const SelectionReport& report);

}  // namespace gliomics
