// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "morphology.hpp"
#include "nifti.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "text_io.hpp"
#include "texture.hpp"

namespace gliomics {

namespace fs = std::filesystem;
using nlohmann::json;

FeatureVector extract_all(const LabelVolume& vol,
                          const ExtractOptions& options) {
  validate_labels(vol);
  FeatureVector out;
  out.values.reserve(kTotalFeatureCount);
  const Vec3 brain = brain_centroid(vol.geom, options.brain_mask);

  for (const Roi roi : {Roi::WT, Roi::TC}) {
    const RoiMask mask = roi_mask(vol, roi);
    if (mask.count() == 0)
      fail(ErrorKind::empty_roi,
           std::string("extract: empty ROI ") + roi_name(roi));

    const MorphFeatures morph = morphology(mask, brain);
    if (morph.degenerate)
      out.warnings.push_back(std::string(roi_name(roi)) +
                             ": single-voxel ROI, axis features set to 0");
    for (double v : morph.as_array()) out.values.push_back(v);

    const TextureFeatures tex = texture_features(vol, mask);
    if (tex.degenerate)
      out.warnings.push_back(
          std::string(roi_name(roi)) +
          ": single gray level, undefined texture features set to 0");
    for (double v : tex.as_array()) out.values.push_back(v);
  }

  const RicValue ric = relative_invasiveness(vol, options.mve);
  out.values.push_back(ric.ric);
  return out;
}

namespace {

struct CohortMeta {
  double age = 0.0;
  double survival_days = 0.0;
  Resection status = Resection::NA;
};

std::map<std::string, CohortMeta> read_cohort_csv(const std::string& path) {
  const std::string content = read_text_file(path);
  std::istringstream in(content);
  std::string line;
  std::map<std::string, CohortMeta> meta;
  bool header = true;
  std::size_t id_col = 0, age_col = 1, surv_col = 2, status_col = 3;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (header) {
      bool found = false;
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] == "id" || fields[c] == "subject_id") {
          id_col = c;
          found = true;
        } else if (fields[c] == "age") {
          age_col = c;
        } else if (fields[c] == "survival_days") {
          surv_col = c;
        } else if (fields[c] == "resection_status") {
          status_col = c;
        }
      }
      if (!found)
        fail(ErrorKind::format,
             "cohort csv must have an 'id' or 'subject_id' column: " + path);
      header = false;
      continue;
    }
    const std::size_t needed =
        std::max({id_col, age_col, surv_col, status_col});
    if (fields.size() <= needed)
      fail(ErrorKind::format, "cohort csv row too short: " + line);
    CohortMeta m;
    m.age = parse_double(fields[age_col], "age in " + path);
    m.survival_days =
        parse_double(fields[surv_col], "survival_days in " + path);
    m.status = resection_from_name(fields[status_col]);
    meta[fields[id_col]] = m;
  }
  return meta;
}

}  // namespace

CohortExtraction extract_cohort(const std::string& root_dir,
                                const ExtractOptions& options, int threads) {
  if (!fs::is_directory(root_dir))
    fail(ErrorKind::io, "cohort directory does not exist: " + root_dir);

  std::vector<std::string> subjects;
  std::vector<std::string> seg_paths;
  CohortExtraction out;
  {
    std::vector<std::string> dirs;
    for (const auto& entry : fs::directory_iterator(root_dir))
      if (entry.is_directory()) dirs.push_back(entry.path().filename().string());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& name : dirs) {
      const std::string base = root_dir + "/" + name + "/seg.nii";
      if (fs::exists(base + ".gz")) {
        subjects.push_back(name);
        seg_paths.push_back(base + ".gz");
      } else if (fs::exists(base)) {
        subjects.push_back(name);
        seg_paths.push_back(base);
      } else {
        out.failures.push_back({name, "no seg.nii or seg.nii.gz"});
      }
    }
  }

  const std::map<std::string, CohortMeta> meta =
      read_cohort_csv(root_dir + "/cohort.csv");

  const std::size_t n = subjects.size();
  std::vector<FeatureVector> vectors(n);
  std::vector<std::string> errors(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      vectors[i] = extract_all(read_label_volume(seg_paths[i]), options);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  FeatureTable& table = out.table;
  table.feature_names = canonical_feature_names();
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      out.failures.push_back({subjects[i], errors[i]});
      continue;
    }
    const auto it = meta.find(subjects[i]);
    if (it == meta.end()) {
      out.failures.push_back({subjects[i], "not listed in cohort.csv"});
      continue;
    }
    table.subjects.push_back(subjects[i]);
    table.age.push_back(it->second.age);
    table.survival_days.push_back(it->second.survival_days);
    table.resection_status.push_back(it->second.status);
    for (double v : vectors[i].values) table.values.data.push_back(v);
    for (const auto& w : vectors[i].warnings)
      out.warnings.push_back(subjects[i] + ": " + w);
  }
  table.values.rows = table.subjects.size();
  table.values.cols = table.feature_names.size();
  table.validate();
  return out;
}

StudyConfig study_config_from_json(const json& j) {
  StudyConfig c;
  c.input_dir = j.value("input_dir", c.input_dir);
  c.holdout_dir = j.value("holdout_dir", c.holdout_dir);
  c.output_dir = j.value("output_dir", c.output_dir);
  if (!j.contains("seed"))
    fail(ErrorKind::config, "study config requires a seed");
  c.seed = j.at("seed").get<std::uint64_t>();
  c.k_folds = j.value("k_folds", c.k_folds);
  c.gtr_only = j.value("gtr_only", c.gtr_only);
  c.threads = j.value("threads", c.threads);
  if (j.contains("selection"))
    c.selection = select_params_from_json(j.at("selection"));
  if (j.contains("forest")) c.forest = forest_params_from_json(j.at("forest"));
  if (j.contains("svr")) c.svr = svr_params_from_json(j.at("svr"));
  if (j.contains("thresholds")) {
    c.thresholds.t_low = j.at("thresholds").value("t_low", c.thresholds.t_low);
    c.thresholds.t_high =
        j.at("thresholds").value("t_high", c.thresholds.t_high);
  }
  c.selection_per_fold = j.value("selection_per_fold", c.selection_per_fold);
  if (j.contains("mve")) {
    c.mve.tolerance = j.at("mve").value("tolerance", c.mve.tolerance);
    c.mve.max_iterations =
        j.at("mve").value("max_iterations", c.mve.max_iterations);
  }
  if (c.input_dir.empty())
    fail(ErrorKind::config, "study config requires input_dir");
  if (c.output_dir.empty())
    fail(ErrorKind::config, "study config requires output_dir");
  return c;
}

json eval_report_to_json(const EvalReport& report) {
  json j = {{"n", report.n},
            {"accuracy", report.accuracy},
            {"mse", report.mse},
            {"mse_median", report.mse_median},
            {"undefined_correlation", report.undefined_correlation}};
  if (report.undefined_correlation) {
    j["spearman_rho"] = nullptr;
    j["pearson_r"] = nullptr;
  } else {
    j["spearman_rho"] = report.spearman_rho;
    j["pearson_r"] = report.pearson_r;
  }
  if (!report.per_fold.empty()) {
    json folds = json::array();
    for (const EvalReport& f : report.per_fold)
      folds.push_back(eval_report_to_json(f));
    j["per_fold"] = folds;
  }
  return j;
}

json run_study(const StudyConfig& config) {
  const Rng root(config.seed);
  ExtractOptions extract_options;
  extract_options.mve = config.mve;

  // Stage 1: extraction.
  CohortExtraction extraction =
      extract_cohort(config.input_dir, extract_options, config.threads);
  write_feature_table(extraction.table, config.output_dir + "/features.csv");

  FeatureTable train_table =
      config.gtr_only ? filter_gtr(extraction.table) : extraction.table;
  if (train_table.n_subjects() < static_cast<std::size_t>(config.k_folds))
    fail(ErrorKind::config,
         "study: fewer training subjects than cross-validation folds");

  // Stage 2: feature selection for the radiomics model.
  const SelectionReport selection =
      select_features(train_table, config.selection, root.child(1).seed(),
                      config.threads);
  write_text_file(config.output_dir + "/selection.json",
                  selection_report_to_json(selection).dump(2) + "\n");
  {
    std::ostringstream os;
    for (const auto& name : selection.selected) os << name << '\n';
    write_text_file(config.output_dir + "/selected_features.txt", os.str());
  }

  // Stage 3: the three prognostic models.
  ModelSpec baseline = model_spec_preset("baseline");

  ModelSpec radiomics = model_spec_preset("radiomics");
  radiomics.forest = config.forest;
  radiomics.selection = config.selection;
  radiomics.run_selection = false;
  radiomics.predictors = selection.selected;
  radiomics.predictors.push_back("age");

  ModelSpec radiomics_cv = radiomics;
  if (config.selection_per_fold) {
    radiomics_cv.predictors.clear();
    radiomics_cv.run_selection = true;
    radiomics_cv.append_age = true;
  }

  ModelSpec invasiveness = model_spec_preset("invasiveness");
  invasiveness.svr = config.svr;

  std::optional<FeatureTable> holdout;
  if (!config.holdout_dir.empty()) {
    CohortExtraction h =
        extract_cohort(config.holdout_dir, extract_options, config.threads);
    for (const auto& f : h.failures)
      extraction.failures.push_back(
          {"holdout/" + f.subject, f.reason});
    holdout = std::move(h.table);
  }

  json models_json;
  const struct {
    const char* name;
    const ModelSpec* spec;
    const ModelSpec* cv_spec;
  } runs[] = {{"baseline", &baseline, &baseline},
              {"radiomics", &radiomics, &radiomics_cv},
              {"invasiveness", &invasiveness, &invasiveness}};

  int model_index = 0;
  for (const auto& run : runs) {
    // Failures carry the stage and model so batch logs stay actionable.
    const auto stage = [&](const char* what) {
      return "study stage " + std::string(what) + " (" + run.name + "): ";
    };
    try {
      const std::uint64_t model_seed = root.child(10 + model_index).seed();
      const TrainedModel model =
          train_model(train_table, *run.spec, model_seed, config.threads);
      save_model(model, config.output_dir + "/models/" + run.name + ".json");

      const std::vector<double> train_pred = predict(model, train_table);
      const EvalReport train_report = compute_metrics(
          train_pred, train_table.survival_days, config.thresholds);

      CvParams cv_params;
      cv_params.k = config.k_folds;
      cv_params.seed = root.child(20 + model_index).seed();
      cv_params.thresholds = config.thresholds;
      cv_params.threads = config.threads;
      const CvResult cv = cross_validate(train_table, *run.cv_spec, cv_params);

      json entry = {{"train", eval_report_to_json(train_report)},
                    {"cv", eval_report_to_json(cv.report)}};
      if (holdout) {
        const std::vector<double> holdout_pred = predict(model, *holdout);
        entry["holdout"] = eval_report_to_json(compute_metrics(
            holdout_pred, holdout->survival_days, config.thresholds));
      }
      models_json[run.name] = entry;
    } catch (const Error& e) {
      throw Error(e.kind(), stage("train/evaluate") + e.what());
    }
    ++model_index;
  }

  json report;
  report["schema"] = "gliomics.study.v1";
  report["seed"] = config.seed;
  report["n_extracted"] = extraction.table.n_subjects();
  report["n_train"] = train_table.n_subjects();
  if (holdout) report["n_holdout"] = holdout->n_subjects();
  report["gtr_only"] = config.gtr_only;
  report["k_folds"] = config.k_folds;
  report["age_survival_pearson_r"] =
      pearson_correlation(train_table.age, train_table.survival_days);
  report["selection"] = selection_report_to_json(selection);
  report["models"] = models_json;
  {
    json failures = json::array();
    for (const auto& f : extraction.failures)
      failures.push_back({{"subject", f.subject}, {"reason", f.reason}});
    report["failures"] = failures;
    report["warnings"] = extraction.warnings;
  }

  write_text_file(config.output_dir + "/report.json", report.dump(2) + "\n");
  write_text_file(config.output_dir + "/report.txt", study_report_text(report));
  return report;
}

namespace {

std::string fmt_metric(double v, int width, int precision) {
  std::ostringstream os;
  os.width(width);
  os.precision(precision);
  os << std::fixed << v;
  return os.str();
}

std::string metrics_cells(const json& r) {
  std::ostringstream os;
  os << fmt_metric(r.at("accuracy").get<double>(), 9, 2);
  os << fmt_metric(r.at("mse").get<double>(), 10, 0);
  os << fmt_metric(r.at("mse_median").get<double>(), 10, 0);
  if (r.at("spearman_rho").is_null())
    os << "       na";
  else
    os << fmt_metric(r.at("spearman_rho").get<double>(), 9, 2);
  return os.str();
}

}  // namespace

std::string study_report_text(const json& report) {
  std::ostringstream os;
  os << "Prognostic model performance (n_train="
     << report.at("n_train").get<std::size_t>() << ", "
     << report.at("k_folds").get<int>() << "-fold CV)\n\n";
  os << "                 ------------ Training -------------"
     << "  --------- Cross-validation ---------\n";
  os << "Model             Accuracy       MSE       mSE      rho"
     << "   Accuracy       MSE       mSE      rho\n";
  const json& models = report.at("models");
  for (const char* name : {"baseline", "radiomics", "invasiveness"}) {
    if (!models.contains(name)) continue;
    os.width(16);
    os.setf(std::ios::left, std::ios::adjustfield);
    os << name;
    os.unsetf(std::ios::adjustfield);
    os << ' ' << metrics_cells(models.at(name).at("train"));
    os << "  " << metrics_cells(models.at(name).at("cv"));
    os << '\n';
  }
  bool any_holdout = false;
  for (const auto& [name, entry] : models.items())
    if (entry.contains("holdout")) any_holdout = true;
  if (any_holdout) {
    os << "\n                 ------------ Holdout --------------\n";
    os << "Model             Accuracy       MSE       mSE      rho\n";
    for (const char* name : {"baseline", "radiomics", "invasiveness"}) {
      if (!models.contains(name) || !models.at(name).contains("holdout"))
        continue;
      os.width(16);
      os.setf(std::ios::left, std::ios::adjustfield);
      os << name;
      os.unsetf(std::ios::adjustfield);
      os << ' ' << metrics_cells(models.at(name).at("holdout")) << '\n';
    }
  }
  return os.str();
}

}  // namespace gliomics
