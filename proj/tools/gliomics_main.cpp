// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0
//
// gliomics command line: every subcommand is a thin shell over the C API in
// gliomics.h. Exit codes: 0 success, 1 validation/configuration error,
// 2 I/O error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "gliomics.h"

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_of(gm_status status) {
  if (status == GM_OK) return 0;
  return status == GM_ERR_IO ? 2 : 1;
}

// Failure sink: prints the library error and remembers the exit code.
struct Run {
  std::string command;
  int code = 0;

  bool check(gm_status status) {
    if (status == GM_OK) return true;
    std::cerr << "gliomics " << command << ": " << gm_last_error() << "\n";
    code = exit_code_of(status);
    return false;
  }
};

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return {buf, ptr};
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  gm_string_free(s);
  return out;
}

std::string read_file(const std::string& path, Run& run) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "gliomics " << run.command << ": cannot open " << path << "\n";
    run.code = 2;
    return {};
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool write_file(const std::string& path, const std::string& content, Run& run) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "gliomics " << run.command << ": cannot write " << path << "\n";
    run.code = 2;
    return false;
  }
  out << content;
  return true;
}

std::string subject_of_path(const std::string& path) {
  const fs::path p(path);
  const std::string parent = p.parent_path().filename().string();
  if (!parent.empty() && parent != "." && parent != "/") return parent;
  std::string stem = p.filename().string();
  for (const char* ext : {".gz", ".nii"}) {
    const std::string e(ext);
    if (stem.size() > e.size() &&
        stem.compare(stem.size() - e.size(), e.size(), e) == 0)
      stem.resize(stem.size() - e.size());
  }
  return stem;
}

using VolumePtr = std::unique_ptr<gm_volume, decltype(&gm_volume_free)>;
using TablePtr = std::unique_ptr<gm_table, decltype(&gm_table_free)>;
using ModelPtr = std::unique_ptr<gm_model, decltype(&gm_model_free)>;

VolumePtr wrap(gm_volume* v) { return {v, &gm_volume_free}; }
TablePtr wrap(gm_table* t) { return {t, &gm_table_free}; }
ModelPtr wrap(gm_model* m) { return {m, &gm_model_free}; }

// Human-readable rendering of an EvalReport JSON document.
void print_eval_text(const json& r) {
  std::printf("n          %zu\n", r.at("n").get<std::size_t>());
  std::printf("accuracy   %.4f\n", r.at("accuracy").get<double>());
  std::printf("MSE        %.2f\n", r.at("mse").get<double>());
  std::printf("mSE        %.2f\n", r.at("mse_median").get<double>());
  if (r.at("spearman_rho").is_null()) {
    std::printf("rho        undefined (zero variance)\n");
  } else {
    std::printf("rho        %.4f\n", r.at("spearman_rho").get<double>());
    std::printf("pearson r  %.4f\n", r.at("pearson_r").get<double>());
  }
}

json model_spec_json(const std::string& preset, const std::string& spec_path,
                     Run& run) {
  if (!spec_path.empty()) {
    const std::string text = read_file(spec_path, run);
    if (run.code != 0) return {};
    return json::parse(text, nullptr, false);
  }
  return json{{"preset", preset}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gliomics: tumor structure-map radiomics and survival models"};
  app.require_subcommand(1);

  // ---- extract ----
  auto* extract = app.add_subcommand(
      "extract", "Extract the 163-value feature vector from a structure map");
  std::string extract_in, extract_cohort_dir, extract_out, extract_subject;
  bool extract_json = false;
  int extract_threads = 0;
  extract->add_option("--in", extract_in, "Input seg.nii[.gz]");
  extract->add_option("--cohort", extract_cohort_dir,
                      "Cohort root directory (overrides --in)");
  extract->add_option("--out", extract_out, "Output CSV path");
  extract->add_option("--subject", extract_subject,
                      "Subject id for single-volume mode");
  extract->add_option("--threads", extract_threads, "Worker threads (0=auto)");
  extract->add_flag("--json", extract_json, "JSON on stdout");

  // ---- ric ----
  auto* ric_cmd = app.add_subcommand(
      "ric", "Relative invasiveness coefficient of a structure map");
  std::string ric_in, ric_dump;
  bool ric_json = false;
  ric_cmd->add_option("--in", ric_in, "Input seg.nii[.gz]")->required();
  ric_cmd->add_option("--dump-ellipsoids", ric_dump,
                      "Write fitted WT/TC ellipsoids to this JSON file");
  ric_cmd->add_flag("--json", ric_json, "JSON on stdout");

  // ---- select ----
  auto* select = app.add_subcommand(
      "select", "Correlation pruning + RFE feature selection");
  std::string select_table, select_out, select_selected;
  double select_threshold = 0.95;
  std::vector<std::size_t> select_sizes;
  int select_k = 10, select_trees = 500, select_threads = 0;
  std::uint64_t select_seed = 0;
  bool select_json = false;
  select->add_option("--table", select_table, "Feature table CSV")->required();
  select->add_option("--threshold", select_threshold,
                     "Pearson |r| pruning threshold");
  select->add_option("--sizes", select_sizes, "Candidate subset sizes");
  select->add_option("--k", select_k, "RFE cross-validation folds");
  select->add_option("--trees", select_trees, "Random forest size");
  select->add_option("--seed", select_seed, "RNG seed")->required();
  select->add_option("--threads", select_threads, "Worker threads");
  select->add_option("--out", select_out, "Write the report JSON here");
  select->add_option("--selected", select_selected,
                     "Write selected feature names here (one per line)");
  select->add_flag("--json", select_json, "JSON on stdout");

  // ---- train ----
  auto* train = app.add_subcommand("train", "Fit a prognostic model");
  std::string train_table, train_model_name = "invasiveness", train_spec,
              train_out, train_features;
  std::uint64_t train_seed = 0;
  int train_threads = 0;
  train->add_option("--table", train_table, "Feature table CSV")->required();
  train->add_option("--model", train_model_name,
                    "Preset: baseline, radiomics or invasiveness");
  train->add_option("--spec", train_spec, "Full model spec JSON file");
  train->add_option("--features", train_features,
                    "Predictor list file (one name per line; overrides preset)");
  train->add_option("--out", train_out, "Output model JSON")->required();
  train->add_option("--seed", train_seed, "RNG seed")->required();
  train->add_option("--threads", train_threads, "Worker threads");

  // ---- predict ----
  auto* predict_cmd = app.add_subcommand("predict", "Predict survival days");
  std::string predict_model, predict_table, predict_out;
  bool predict_json = false;
  predict_cmd->add_option("--model", predict_model, "Model JSON")->required();
  predict_cmd->add_option("--table", predict_table, "Feature table CSV")
      ->required();
  predict_cmd->add_option("--out", predict_out, "Output CSV path");
  predict_cmd->add_flag("--json", predict_json, "JSON on stdout");

  // ---- evaluate ----
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score a model against a table's survival targets");
  std::string eval_model, eval_table;
  double eval_tlow = 300.0, eval_thigh = 450.0;
  bool eval_json = false;
  evaluate->add_option("--model", eval_model, "Model JSON")->required();
  evaluate->add_option("--table", eval_table, "Feature table CSV")->required();
  evaluate->add_option("--t-low", eval_tlow, "Short/intermediate threshold, days");
  evaluate->add_option("--t-high", eval_thigh, "Intermediate/long threshold, days");
  evaluate->add_flag("--json", eval_json, "JSON on stdout");

  // ---- cv ----
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation of a model spec");
  std::string cv_table, cv_model_name = "invasiveness", cv_spec;
  int cv_k = 10, cv_threads = 0;
  std::uint64_t cv_seed = 0;
  bool cv_json = false;
  cv->add_option("--table", cv_table, "Feature table CSV")->required();
  cv->add_option("--model", cv_model_name, "Model preset");
  cv->add_option("--spec", cv_spec, "Full model spec JSON file");
  cv->add_option("--k", cv_k, "Number of folds");
  cv->add_option("--seed", cv_seed, "RNG seed")->required();
  cv->add_option("--threads", cv_threads, "Worker threads");
  cv->add_flag("--json", cv_json, "JSON on stdout");

  // ---- study ----
  auto* study = app.add_subcommand(
      "study", "Run the full extract/select/train/evaluate workflow");
  std::string study_config, study_in, study_out_dir, study_holdout;
  std::uint64_t study_seed = 0;
  bool study_seed_set = false, study_json = false;
  int study_threads = -1;
  study->add_option("--config", study_config, "Study config JSON file");
  study->add_option("--in", study_in, "Override input_dir");
  study->add_option("--out", study_out_dir, "Override output_dir");
  study->add_option("--holdout", study_holdout, "Override holdout_dir");
  study->add_option("--seed", study_seed, "Override seed")
      ->each([&](const std::string&) { study_seed_set = true; });
  study->add_option("--threads", study_threads, "Override threads");
  study->add_flag("--json", study_json, "JSON on stdout");

  // ---- fuse ----
  auto* fuse = app.add_subcommand("fuse", "Majority-vote label fusion");
  std::vector<std::string> fuse_in;
  std::vector<double> fuse_weights;
  std::string fuse_out;
  fuse->add_option("--in", fuse_in, "Member label maps")->required();
  fuse->add_option("--weights", fuse_weights, "Per-member weights");
  fuse->add_option("--out", fuse_out, "Fused output volume")->required();

  // ---- postproc ----
  auto* postproc = app.add_subcommand(
      "postproc", "Post-process a predicted structure map");
  std::string pp_in, pp_out, pp_t1gd;
  std::size_t pp_min_wt = 500, pp_min_et = 50, pp_et_floor = 500;
  double pp_z_et = 0.0;
  int pp_connectivity = 26;
  postproc->add_option("--in", pp_in, "Input seg.nii[.gz]")->required();
  postproc->add_option("--out", pp_out, "Output volume")->required();
  postproc->add_option("--min-wt", pp_min_wt, "Minimum WT component voxels");
  postproc->add_option("--min-et", pp_min_et, "Minimum ET component voxels");
  postproc->add_option("--et-floor", pp_et_floor,
                       "Total-ET floor below which ET becomes label 1");
  postproc->add_option("--t1gd", pp_t1gd,
                       "Raw T1Gd volume; enables the intensity filter");
  postproc->add_option("--z-et", pp_z_et, "z-score threshold for ET voxels");
  postproc->add_option("--connectivity", pp_connectivity, "6 or 26");

  // ---- segmetrics ----
  auto* segmetrics = app.add_subcommand(
      "segmetrics", "Dice and Hausdorff distance between label maps");
  std::string sm_pred, sm_ref;
  bool sm_hd95 = false, sm_json = false;
  segmetrics->add_option("--pred", sm_pred, "Predicted labels")->required();
  segmetrics->add_option("--ref", sm_ref, "Reference labels")->required();
  segmetrics->add_flag("--hd95", sm_hd95, "95th-percentile Hausdorff");
  segmetrics->add_flag("--json", sm_json, "JSON on stdout (default)");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
  std::string synth_spec, synth_out;
  std::uint64_t synth_seed = 0;
  bool synth_seed_set = false, synth_json = false;
  int synth_n = -1;
  synth->add_option("--spec", synth_spec, "Cohort spec JSON file");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Override seed")
      ->each([&](const std::string&) { synth_seed_set = true; });
  synth->add_option("--n", synth_n, "Override subject count");
  synth->add_flag("--json", synth_json, "JSON summary on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints usage or the flag error
    return rc == 0 ? 0 : 1;     // --help and --version exit 0
  }

  Run run;
  run.command = app.get_subcommands().front()->get_name();

  if (extract->parsed()) {
    if (!extract_cohort_dir.empty()) {
      gm_table* table = nullptr;
      char* failures = nullptr;
      if (!run.check(gm_extract_cohort(extract_cohort_dir.c_str(), nullptr,
                                       extract_threads, &table, &failures)))
        return run.code;
      auto table_guard = wrap(table);
      const json fail_doc = json::parse(take_string(failures));
      for (const auto& f : fail_doc.at("failures"))
        std::cerr << "warning: skipped " << f.at("subject").get<std::string>()
                  << ": " << f.at("reason").get<std::string>() << "\n";
      for (const auto& w : fail_doc.at("warnings"))
        std::cerr << "warning: " << w.get<std::string>() << "\n";
      if (extract_out.empty()) {
        std::cerr << "gliomics extract: --cohort mode requires --out\n";
        return 1;
      }
      if (!run.check(gm_table_write(table, extract_out.c_str())))
        return run.code;
      if (extract_json) {
        const json doc = {{"subjects", gm_table_rows(table)},
                          {"out", extract_out}};
        std::cout << doc.dump(2) << "\n";
      }
      return run.code;
    }

    if (extract_in.empty()) {
      std::cerr << "gliomics extract: need --in or --cohort\n";
      return 1;
    }
    gm_volume* vol = nullptr;
    if (!run.check(gm_volume_read_labels(extract_in.c_str(), &vol)))
      return run.code;
    auto vol_guard = wrap(vol);
    gm_features* features = nullptr;
    if (!run.check(gm_extract_features(vol, &features))) return run.code;
    const std::string subject =
        extract_subject.empty() ? subject_of_path(extract_in) : extract_subject;

    std::ostringstream csv;
    csv << "subject_id";
    for (std::size_t i = 0; i < gm_features_count(features); ++i)
      csv << ',' << gm_features_name(features, i);
    csv << '\n' << subject;
    for (std::size_t i = 0; i < gm_features_count(features); ++i)
      csv << ',' << fmt(gm_features_value(features, i));
    csv << '\n';

    if (extract_json) {
      json names = json::array(), values = json::array();
      for (std::size_t i = 0; i < gm_features_count(features); ++i) {
        names.push_back(gm_features_name(features, i));
        values.push_back(gm_features_value(features, i));
      }
      const json doc = {
          {"subject", subject}, {"names", names}, {"values", values}};
      std::cout << doc.dump(2) << "\n";
    }
    gm_features_free(features);
    if (!extract_out.empty()) {
      if (!write_file(extract_out, csv.str(), run)) return run.code;
    } else if (!extract_json) {
      std::cout << csv.str();
    }
    return run.code;
  }

  if (ric_cmd->parsed()) {
    gm_volume* vol = nullptr;
    if (!run.check(gm_volume_read_labels(ric_in.c_str(), &vol)))
      return run.code;
    auto vol_guard = wrap(vol);
    double value = 0.0;
    char* ellipsoids = nullptr;
    if (!run.check(gm_ric(vol, &value,
                          ric_dump.empty() && !ric_json ? nullptr : &ellipsoids)))
      return run.code;
    const std::string dump = ellipsoids ? take_string(ellipsoids) : "";
    if (!ric_dump.empty() && !write_file(ric_dump, dump + "\n", run))
      return run.code;
    if (ric_json)
      std::cout << dump << "\n";
    else
      std::cout << fmt(value) << "\n";
    return run.code;
  }

  if (select->parsed()) {
    gm_table* table = nullptr;
    if (!run.check(gm_table_read(select_table.c_str(), &table)))
      return run.code;
    auto table_guard = wrap(table);
    json params = {{"correlation_threshold", select_threshold},
                   {"seed", select_seed},
                   {"threads", select_threads},
                   {"rfe",
                    {{"folds", select_k},
                     {"forest", {{"n_trees", select_trees}}}}}};
    if (!select_sizes.empty()) params["rfe"]["sizes"] = select_sizes;
    char* report_raw = nullptr;
    if (!run.check(gm_select_features(table, params.dump().c_str(),
                                      &report_raw)))
      return run.code;
    const std::string report = take_string(report_raw);
    if (!select_out.empty() && !write_file(select_out, report + "\n", run))
      return run.code;
    const json doc = json::parse(report);
    if (!select_selected.empty()) {
      std::ostringstream os;
      for (const auto& name : doc.at("selected"))
        os << name.get<std::string>() << '\n';
      if (!write_file(select_selected, os.str(), run)) return run.code;
    }
    if (select_json) {
      std::cout << report << "\n";
    } else {
      std::cout << "selected " << doc.at("selected").size()
                << " features (optimal size "
                << doc.at("optimal_size").get<std::size_t>() << ")\n";
      for (const auto& entry : doc.at("ranking"))
        std::printf("%8.1f  %s\n", entry.at("importance").get<double>(),
                    entry.at("feature").get<std::string>().c_str());
    }
    return run.code;
  }

  if (train->parsed()) {
    gm_table* table = nullptr;
    if (!run.check(gm_table_read(train_table.c_str(), &table)))
      return run.code;
    auto table_guard = wrap(table);
    json spec = model_spec_json(train_model_name, train_spec, run);
    if (run.code != 0) return run.code;
    if (!train_features.empty()) {
      const std::string text = read_file(train_features, run);
      if (run.code != 0) return run.code;
      std::istringstream in(text);
      std::vector<std::string> predictors;
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) predictors.push_back(line);
      }
      spec["predictors"] = predictors;
      spec["run_selection"] = false;
    }
    gm_model* model = nullptr;
    if (!run.check(gm_train(table, spec.dump().c_str(), train_seed,
                            train_threads, &model)))
      return run.code;
    auto model_guard = wrap(model);
    if (!run.check(gm_model_save(model, train_out.c_str()))) return run.code;
    return run.code;
  }

  if (predict_cmd->parsed()) {
    gm_model* model = nullptr;
    if (!run.check(gm_model_load(predict_model.c_str(), &model)))
      return run.code;
    auto model_guard = wrap(model);
    gm_table* table = nullptr;
    if (!run.check(gm_table_read(predict_table.c_str(), &table)))
      return run.code;
    auto table_guard = wrap(table);
    double* pred = nullptr;
    std::size_t n = 0;
    if (!run.check(gm_predict(model, table, &pred, &n))) return run.code;
    std::ostringstream csv;
    csv << "subject_id,predicted_survival_days\n";
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      csv << gm_table_subject(table, i) << ',' << fmt(pred[i]) << '\n';
      rows.push_back(
          {{"subject", gm_table_subject(table, i)}, {"prediction", pred[i]}});
    }
    gm_buffer_free(pred);
    if (!predict_out.empty()) {
      if (!write_file(predict_out, csv.str(), run)) return run.code;
    }
    if (predict_json)
      std::cout << rows.dump(2) << "\n";
    else if (predict_out.empty())
      std::cout << csv.str();
    return run.code;
  }

  if (evaluate->parsed()) {
    gm_model* model = nullptr;
    if (!run.check(gm_model_load(eval_model.c_str(), &model))) return run.code;
    auto model_guard = wrap(model);
    gm_table* table = nullptr;
    if (!run.check(gm_table_read(eval_table.c_str(), &table))) return run.code;
    auto table_guard = wrap(table);
    double* pred = nullptr;
    std::size_t n = 0;
    if (!run.check(gm_predict(model, table, &pred, &n))) return run.code;
    std::vector<double> truth(n);
    if (!run.check(gm_table_survival(table, truth.data()))) {
      gm_buffer_free(pred);
      return run.code;
    }
    const json params = {{"t_low", eval_tlow}, {"t_high", eval_thigh}};
    char* report_raw = nullptr;
    const gm_status status =
        gm_evaluate(pred, truth.data(), n, params.dump().c_str(), &report_raw);
    gm_buffer_free(pred);
    if (!run.check(status)) return run.code;
    const std::string report = take_string(report_raw);
    if (eval_json)
      std::cout << report << "\n";
    else
      print_eval_text(json::parse(report));
    return run.code;
  }

  if (cv->parsed()) {
    gm_table* table = nullptr;
    if (!run.check(gm_table_read(cv_table.c_str(), &table))) return run.code;
    auto table_guard = wrap(table);
    const json spec = model_spec_json(cv_model_name, cv_spec, run);
    if (run.code != 0) return run.code;
    char* report_raw = nullptr;
    if (!run.check(gm_cross_validate(table, spec.dump().c_str(), cv_k, cv_seed,
                                     cv_threads, &report_raw)))
      return run.code;
    const std::string report = take_string(report_raw);
    if (cv_json)
      std::cout << report << "\n";
    else
      print_eval_text(json::parse(report));
    return run.code;
  }

  if (study->parsed()) {
    json config = json::object();
    if (!study_config.empty()) {
      const std::string text = read_file(study_config, run);
      if (run.code != 0) return run.code;
      config = json::parse(text, nullptr, false);
      if (config.is_discarded()) {
        std::cerr << "gliomics study: cannot parse " << study_config << "\n";
        return 1;
      }
    }
    if (!study_in.empty()) config["input_dir"] = study_in;
    if (!study_out_dir.empty()) config["output_dir"] = study_out_dir;
    if (!study_holdout.empty()) config["holdout_dir"] = study_holdout;
    if (study_seed_set) config["seed"] = study_seed;
    if (study_threads >= 0) config["threads"] = study_threads;
    char* report_raw = nullptr;
    if (!run.check(gm_run_study(config.dump().c_str(), &report_raw)))
      return run.code;
    const std::string report = take_string(report_raw);
    if (study_json) {
      std::cout << report << "\n";
    } else {
      const json doc = json::parse(report);
      std::cout << "study complete: " << doc.at("n_train").get<std::size_t>()
                << " training subjects, report written to "
                << config.value("output_dir", std::string()) << "\n";
    }
    return run.code;
  }

  if (fuse->parsed()) {
    std::vector<VolumePtr> guards;
    std::vector<const gm_volume*> members;
    for (const std::string& path : fuse_in) {
      gm_volume* vol = nullptr;
      if (!run.check(gm_volume_read_labels(path.c_str(), &vol)))
        return run.code;
      guards.push_back(wrap(vol));
      members.push_back(vol);
    }
    gm_volume* fused = nullptr;
    if (!run.check(gm_fuse(members.data(),
                           fuse_weights.empty() ? nullptr : fuse_weights.data(),
                           members.size(), &fused)))
      return run.code;
    auto fused_guard = wrap(fused);
    if (!run.check(gm_volume_write(fused, fuse_out.c_str()))) return run.code;
    return run.code;
  }

  if (postproc->parsed()) {
    gm_volume* seg = nullptr;
    if (!run.check(gm_volume_read_labels(pp_in.c_str(), &seg)))
      return run.code;
    auto seg_guard = wrap(seg);
    VolumePtr z_guard(nullptr, &gm_volume_free);
    gm_volume* z_t1gd = nullptr;
    if (!pp_t1gd.empty()) {
      gm_volume* raw = nullptr;
      if (!run.check(gm_volume_read(pp_t1gd.c_str(), &raw))) return run.code;
      auto raw_guard = wrap(raw);
      if (!run.check(gm_zscore(raw, "nonzero", &z_t1gd))) return run.code;
      z_guard = wrap(z_t1gd);
    }
    const json params = {{"min_wt_voxels", pp_min_wt},
                         {"min_et_voxels", pp_min_et},
                         {"et_floor_voxels", pp_et_floor},
                         {"intensity_filter", !pp_t1gd.empty()},
                         {"z_et", pp_z_et},
                         {"connectivity", pp_connectivity}};
    gm_volume* out = nullptr;
    if (!run.check(gm_postprocess(seg, z_t1gd, params.dump().c_str(), &out)))
      return run.code;
    auto out_guard = wrap(out);
    if (!run.check(gm_volume_write(out, pp_out.c_str()))) return run.code;
    return run.code;
  }

  if (segmetrics->parsed()) {
    gm_volume* pred = nullptr;
    if (!run.check(gm_volume_read_labels(sm_pred.c_str(), &pred)))
      return run.code;
    auto pred_guard = wrap(pred);
    gm_volume* ref = nullptr;
    if (!run.check(gm_volume_read_labels(sm_ref.c_str(), &ref)))
      return run.code;
    auto ref_guard = wrap(ref);
    char* report_raw = nullptr;
    if (!run.check(gm_seg_metrics(pred, ref, sm_hd95 ? 95 : 100, &report_raw)))
      return run.code;
    std::cout << take_string(report_raw) << "\n";
    return run.code;
  }

  if (synth->parsed()) {
    json spec = json::object();
    if (!synth_spec.empty()) {
      const std::string text = read_file(synth_spec, run);
      if (run.code != 0) return run.code;
      spec = json::parse(text, nullptr, false);
      if (spec.is_discarded()) {
        std::cerr << "gliomics synth: cannot parse " << synth_spec << "\n";
        return 1;
      }
    }
    if (synth_seed_set) spec["seed"] = synth_seed;
    if (synth_n >= 0) spec["n_subjects"] = synth_n;
    char* summary_raw = nullptr;
    if (!run.check(gm_make_cohort(spec.dump().c_str(), synth_out.c_str(),
                                  &summary_raw)))
      return run.code;
    const std::string summary = take_string(summary_raw);
    if (synth_json)
      std::cout << summary << "\n";
    else {
      const json doc = json::parse(summary);
      for (const auto& w : doc.at("warnings"))
        std::cerr << "warning: " << w.get<std::string>() << "\n";
      std::cout << "wrote " << doc.at("n_subjects").get<std::size_t>()
                << " subjects to " << synth_out << "\n";
    }
    return run.code;
  }

  return 0;
}
