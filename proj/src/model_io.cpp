// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "model_io.hpp"

#include <cmath>

#include "errors.hpp"
#include "text_io.hpp"

namespace gliomics {

using nlohmann::json;

namespace {
constexpr const char* kModelSchema = "gliomics.model.v1";
}

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::linear: return "linear";
    case ModelKind::forest: return "forest";
    case ModelKind::svr: return "svr";
  }
  return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "forest") return ModelKind::forest;
  if (name == "svr") return ModelKind::svr;
  fail(ErrorKind::config, "unknown model kind: " + name);
}

ModelSpec model_spec_preset(const std::string& name) {
  ModelSpec spec;
  if (name == "baseline") {
    spec.kind = ModelKind::linear;
    spec.predictors = {"age"};
  } else if (name == "radiomics") {
    spec.kind = ModelKind::forest;
    spec.run_selection = true;
    spec.append_age = true;
  } else if (name == "invasiveness") {
    spec.kind = ModelKind::svr;
    spec.predictors = {"age", "RIC"};
  } else {
    fail(ErrorKind::config,
         "unknown model preset: " + name +
             " (expected baseline, radiomics or invasiveness)");
  }
  return spec;
}

json forest_params_to_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"mtry", p.mtry},
          {"min_leaf", p.min_leaf},
          {"bootstrap", p.bootstrap}};
}

ForestParams forest_params_from_json(const json& j) {
  ForestParams p;
  p.n_trees = j.value("n_trees", p.n_trees);
  p.mtry = j.value("mtry", p.mtry);
  p.min_leaf = j.value("min_leaf", p.min_leaf);
  p.bootstrap = j.value("bootstrap", p.bootstrap);
  return p;
}

json svr_params_to_json(const SvrParams& p) {
  return {{"kernel", p.kernel == SvrKernel::rbf ? "rbf" : "linear"},
          {"gamma", p.gamma},
          {"c", p.c},
          {"epsilon", p.epsilon},
          {"tol", p.tol},
          {"max_updates", p.max_updates}};
}

SvrParams svr_params_from_json(const json& j) {
  SvrParams p;
  const std::string kernel = j.value("kernel", std::string("rbf"));
  if (kernel == "rbf")
    p.kernel = SvrKernel::rbf;
  else if (kernel == "linear")
    p.kernel = SvrKernel::linear;
  else
    fail(ErrorKind::config, "unknown SVR kernel: " + kernel);
  p.gamma = j.value("gamma", p.gamma);
  p.c = j.value("c", p.c);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.tol = j.value("tol", p.tol);
  p.max_updates = j.value("max_updates", p.max_updates);
  return p;
}

json select_params_to_json(const SelectParams& p) {
  return {{"correlation_threshold", p.correlation_threshold},
          {"exclude", p.exclude},
          {"rfe",
           {{"forest", forest_params_to_json(p.rfe.forest)},
            {"sizes", p.rfe.sizes},
            {"folds", p.rfe.folds},
            {"one_at_a_time", p.rfe.one_at_a_time},
            {"permutation_importance", p.rfe.permutation_importance},
            {"tie_tolerance", p.rfe.tie_tolerance}}}};
}

SelectParams select_params_from_json(const json& j) {
  SelectParams p;
  p.correlation_threshold =
      j.value("correlation_threshold", p.correlation_threshold);
  if (j.contains("exclude"))
    p.exclude = j.at("exclude").get<std::vector<std::string>>();
  if (j.contains("rfe")) {
    const json& r = j.at("rfe");
    if (r.contains("forest"))
      p.rfe.forest = forest_params_from_json(r.at("forest"));
    if (r.contains("sizes"))
      p.rfe.sizes = r.at("sizes").get<std::vector<std::size_t>>();
    p.rfe.folds = r.value("folds", p.rfe.folds);
    p.rfe.one_at_a_time = r.value("one_at_a_time", p.rfe.one_at_a_time);
    p.rfe.permutation_importance =
        r.value("permutation_importance", p.rfe.permutation_importance);
    p.rfe.tie_tolerance = r.value("tie_tolerance", p.rfe.tie_tolerance);
  }
  return p;
}

ModelSpec model_spec_from_json(const json& j) {
  ModelSpec spec;
  if (j.contains("preset")) {
    spec = model_spec_preset(j.at("preset").get<std::string>());
  }
  if (j.contains("kind"))
    spec.kind = model_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("predictors"))
    spec.predictors = j.at("predictors").get<std::vector<std::string>>();
  if (j.contains("forest"))
    spec.forest = forest_params_from_json(j.at("forest"));
  if (j.contains("svr")) spec.svr = svr_params_from_json(j.at("svr"));
  spec.run_selection = j.value("run_selection", spec.run_selection);
  spec.append_age = j.value("append_age", spec.append_age);
  if (j.contains("selection"))
    spec.selection = select_params_from_json(j.at("selection"));
  return spec;
}

json model_spec_to_json(const ModelSpec& spec) {
  return {{"kind", model_kind_name(spec.kind)},
          {"predictors", spec.predictors},
          {"forest", forest_params_to_json(spec.forest)},
          {"svr", svr_params_to_json(spec.svr)},
          {"run_selection", spec.run_selection},
          {"append_age", spec.append_age},
          {"selection", select_params_to_json(spec.selection)}};
}

TrainedModel train_model(const FeatureTable& table, const ModelSpec& spec,
                         std::uint64_t seed, int threads) {
  TrainedModel out;
  out.kind = spec.kind;

  std::vector<std::string> predictors = spec.predictors;
  if (spec.run_selection) {
    out.selection_report = select_features(table, spec.selection, seed, threads);
    out.has_selection_report = true;
    predictors = out.selection_report.selected;
    if (spec.append_age) predictors.push_back("age");
  }
  if (predictors.empty())
    fail(ErrorKind::config, "train_model: no predictors specified");
  out.predictors = predictors;

  const Matrix x = table.design_matrix(predictors);
  const std::vector<double>& y = table.survival_days;
  switch (spec.kind) {
    case ModelKind::linear:
      out.model = fit_linear(x, y);
      break;
    case ModelKind::forest:
      out.model = fit_forest(x, y, spec.forest, seed, threads);
      break;
    case ModelKind::svr:
      out.model = fit_svr(x, y, spec.svr);
      break;
  }
  return out;
}

std::vector<double> predict(const TrainedModel& model,
                            const FeatureTable& table) {
  const Matrix x = table.design_matrix(model.predictors);
  std::vector<double> out =
      std::visit([&](const auto& m) { return predict(m, x); }, model.model);
  for (double v : out)
    if (!std::isfinite(v))
      fail(ErrorKind::validation, "model produced a non-finite prediction");
  return out;
}

namespace {

json tree_to_json(const Tree& tree) {
  json feature = json::array(), threshold = json::array(),
       left = json::array(), right = json::array(), value = json::array();
  for (const TreeNode& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return {{"feature", feature},
          {"threshold", threshold},
          {"left", left},
          {"right", right},
          {"value", value}};
}

Tree tree_from_json(const json& j) {
  Tree tree;
  const auto& feature = j.at("feature");
  const auto& threshold = j.at("threshold");
  const auto& left = j.at("left");
  const auto& right = j.at("right");
  const auto& value = j.at("value");
  for (std::size_t i = 0; i < feature.size(); ++i) {
    TreeNode n;
    n.feature = feature[i].get<std::int32_t>();
    n.threshold = threshold[i].get<double>();
    n.left = left[i].get<std::int32_t>();
    n.right = right[i].get<std::int32_t>();
    n.value = value[i].get<double>();
    tree.nodes.push_back(n);
  }
  return tree;
}

}  // namespace

json model_to_json(const TrainedModel& model) {
  json j;
  j["schema"] = kModelSchema;
  j["kind"] = model_kind_name(model.kind);
  j["predictors"] = model.predictors;
  switch (model.kind) {
    case ModelKind::linear: {
      const auto& m = std::get<LinearModel>(model.model);
      j["linear"] = {{"intercept", m.intercept}, {"slopes", m.slopes}};
      break;
    }
    case ModelKind::forest: {
      const auto& m = std::get<ForestModel>(model.model);
      json trees = json::array();
      for (const Tree& t : m.trees) trees.push_back(tree_to_json(t));
      j["forest"] = {{"params", forest_params_to_json(m.params)},
                     {"seed", m.seed},
                     {"importance", m.importance},
                     {"trees", trees}};
      break;
    }
    case ModelKind::svr: {
      const auto& m = std::get<SvrModel>(model.model);
      j["svr"] = {{"params", svr_params_to_json(m.params)},
                  {"gamma", m.gamma},
                  {"mean", m.mean},
                  {"sd", m.sd},
                  {"support_vectors", m.support_vectors},
                  {"dual_coefficients", m.dual_coefficients},
                  {"bias", m.bias},
                  {"kkt_violation", m.kkt_violation}};
      break;
    }
  }
  return j;
}

TrainedModel model_from_json(const json& j) {
  if (j.value("schema", std::string()) != kModelSchema)
    fail(ErrorKind::format, "not a gliomics model document (bad schema field)");
  TrainedModel model;
  model.kind = model_kind_from_name(j.at("kind").get<std::string>());
  model.predictors = j.at("predictors").get<std::vector<std::string>>();
  switch (model.kind) {
    case ModelKind::linear: {
      LinearModel m;
      m.intercept = j.at("linear").at("intercept").get<double>();
      m.slopes = j.at("linear").at("slopes").get<std::vector<double>>();
      model.model = std::move(m);
      break;
    }
    case ModelKind::forest: {
      ForestModel m;
      const json& f = j.at("forest");
      m.params = forest_params_from_json(f.at("params"));
      m.seed = f.at("seed").get<std::uint64_t>();
      m.importance = f.at("importance").get<std::vector<double>>();
      for (const json& t : f.at("trees")) m.trees.push_back(tree_from_json(t));
      model.model = std::move(m);
      break;
    }
    case ModelKind::svr: {
      SvrModel m;
      const json& s = j.at("svr");
      m.params = svr_params_from_json(s.at("params"));
      m.gamma = s.at("gamma").get<double>();
      m.mean = s.at("mean").get<std::vector<double>>();
      m.sd = s.at("sd").get<std::vector<double>>();
      m.support_vectors =
          s.at("support_vectors").get<std::vector<std::vector<double>>>();
      m.dual_coefficients =
          s.at("dual_coefficients").get<std::vector<double>>();
      m.bias = s.at("bias").get<double>();
      m.kkt_violation = s.value("kkt_violation", 0.0);
      model.model = std::move(m);
      break;
    }
  }
  return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

TrainedModel load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::format, "cannot parse model JSON " + path + ": " + e.what());
  }
  return model_from_json(j);
}

json selection_report_to_json(const SelectionReport& report) {
  json removed = json::array();
  for (const auto& r : report.prune.removed)
    removed.push_back({{"kept", r.kept}, {"removed", r.removed}, {"r", r.r}});
  json ranking = json::array();
  for (const auto& [name, importance] : report.ranking)
    ranking.push_back({{"feature", name}, {"importance", importance}});
  json curve = json::array();
  for (const auto& [size, rmse] : report.cv_curve)
    curve.push_back({{"size", size}, {"cv_rmse", rmse}});
  return {{"schema", "gliomics.selection.v1"},
          {"prune_threshold", report.prune_threshold},
          {"removed_correlated", removed},
          {"constant_features", report.prune.constant_features},
          {"kept_after_prune", report.prune.kept},
          {"ranking", ranking},
          {"selected", report.selected},
          {"cv_curve", curve},
          {"optimal_size", report.optimal_size}};
}

}  // namespace gliomics
