// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "gliomics.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <variant>

#include "cross_validation.hpp"
#include "ellipsoid.hpp"
#include "errors.hpp"
#include "feature_names.hpp"
#include "feature_table.hpp"
#include "fusion.hpp"
#include "metrics.hpp"
#include "model_io.hpp"
#include "nifti.hpp"
#include "pipeline.hpp"
#include "synthetic.hpp"
#include "text_io.hpp"
#include "volume.hpp"

#include "json.hpp"

using nlohmann::json;

struct gm_volume {
  gliomics::VolumeVariant value;
};

struct gm_table {
  gliomics::FeatureTable value;
};

struct gm_model {
  gliomics::TrainedModel value;
};

struct gm_features {
  std::vector<std::string> names;
  std::vector<double> values;
};

namespace {

thread_local std::string g_last_error;

gm_status status_of(gliomics::ErrorKind kind) {
  using gliomics::ErrorKind;
  switch (kind) {
    case ErrorKind::validation: return GM_ERR_VALIDATION;
    case ErrorKind::io: return GM_ERR_IO;
    case ErrorKind::format: return GM_ERR_FORMAT;
    case ErrorKind::unsupported: return GM_ERR_UNSUPPORTED;
    case ErrorKind::config: return GM_ERR_CONFIG;
    case ErrorKind::degenerate: return GM_ERR_DEGENERATE;
    case ErrorKind::empty_roi: return GM_ERR_EMPTY_ROI;
    case ErrorKind::iteration_limit: return GM_ERR_ITERATION_LIMIT;
    case ErrorKind::shape: return GM_ERR_SHAPE;
  }
  return GM_ERR_INTERNAL;
}

template <typename Fn>
gm_status guarded(Fn&& fn) {
  try {
    fn();
    return GM_OK;
  } catch (const gliomics::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    g_last_error = std::string("JSON error: ") + e.what();
    return GM_ERR_FORMAT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_json(const char* text, const char* /*what*/) {
  if (text == nullptr || *text == '\0') return json::object();
  return json::parse(text);  // json::exception mapped by guarded()
}

const gliomics::VolumeGeometry& geometry_of(const gm_volume* vol) {
  return std::visit([](const auto& v) -> const gliomics::VolumeGeometry& {
    return v.geom;
  }, vol->value);
}

const gliomics::LabelVolume& require_labels(const gm_volume* vol,
                                            const char* what) {
  if (!std::holds_alternative<gliomics::LabelVolume>(vol->value))
    gliomics::fail(gliomics::ErrorKind::validation,
                   std::string(what) + ": expected a label volume");
  return std::get<gliomics::LabelVolume>(vol->value);
}

const gliomics::IntensityVolume& require_intensity(const gm_volume* vol,
                                                   const char* what) {
  if (!std::holds_alternative<gliomics::IntensityVolume>(vol->value))
    gliomics::fail(gliomics::ErrorKind::validation,
                   std::string(what) + ": expected an intensity volume");
  return std::get<gliomics::IntensityVolume>(vol->value);
}

json ellipsoid_to_json(const gliomics::Ellipsoid& e) {
  json orientation = json::array();
  for (int r = 0; r < 3; ++r)
    orientation.push_back({e.orientation.m[r][0], e.orientation.m[r][1],
                           e.orientation.m[r][2]});
  return {{"center", {e.center.x, e.center.y, e.center.z}},
          {"semi_axes", {e.semi_axes[0], e.semi_axes[1], e.semi_axes[2]}},
          {"orientation", orientation},
          {"volume", e.volume()}};
}

json region_to_json(const gliomics::RegionScore& s) {
  json j;
  j["dice"] = s.dice;
  if (std::isinf(s.hausdorff))
    j["hausdorff"] = nullptr;  // one mask empty
  else
    j["hausdorff"] = s.hausdorff;
  return j;
}

gliomics::SurvivalThresholds thresholds_from_json(const json& j) {
  gliomics::SurvivalThresholds t;
  t.t_low = j.value("t_low", t.t_low);
  t.t_high = j.value("t_high", t.t_high);
  return t;
}

}  // namespace

extern "C" {

const char* gm_version(void) { return "1.0.0"; }

const char* gm_last_error(void) { return g_last_error.c_str(); }

void gm_string_free(char* s) { std::free(s); }
void gm_buffer_free(double* p) { std::free(p); }

/* ---- volumes ------------------------------------------------------- */

gm_status gm_volume_read(const char* path, gm_volume** out) {
  return guarded([&] { *out = new gm_volume{gliomics::read_volume(path)}; });
}

gm_status gm_volume_read_labels(const char* path, gm_volume** out) {
  return guarded(
      [&] { *out = new gm_volume{gliomics::read_label_volume(path)}; });
}

gm_status gm_volume_write(const gm_volume* vol, const char* path) {
  return guarded([&] {
    std::visit([&](const auto& v) { gliomics::write_volume(v, path); },
               vol->value);
  });
}

void gm_volume_free(gm_volume* vol) { delete vol; }

int gm_volume_is_labels(const gm_volume* vol) {
  return std::holds_alternative<gliomics::LabelVolume>(vol->value) ? 1 : 0;
}

void gm_volume_dims(const gm_volume* vol, int* nx, int* ny, int* nz) {
  const auto& g = geometry_of(vol);
  if (nx) *nx = g.nx;
  if (ny) *ny = g.ny;
  if (nz) *nz = g.nz;
}

void gm_volume_spacing(const gm_volume* vol, double* sx, double* sy,
                       double* sz) {
  const auto& g = geometry_of(vol);
  if (sx) *sx = g.sx;
  if (sy) *sy = g.sy;
  if (sz) *sz = g.sz;
}

gm_status gm_zscore(const gm_volume* vol, const char* mask_kind,
                    gm_volume** out) {
  return guarded([&] {
    const auto& intensity = require_intensity(vol, "gm_zscore");
    const std::string kind = mask_kind ? mask_kind : "volume";
    if (kind == "volume") {
      *out = new gm_volume{gliomics::zscore_normalize(intensity, nullptr)};
    } else if (kind == "nonzero") {
      gliomics::RoiMask mask;
      mask.geom = intensity.geom;
      mask.kind = gliomics::Roi::Brain;
      mask.data.resize(intensity.data.size());
      for (std::size_t i = 0; i < intensity.data.size(); ++i)
        mask.data[i] = intensity.data[i] != 0.0f ? 1 : 0;
      *out = new gm_volume{gliomics::zscore_normalize(intensity, &mask)};
    } else {
      gliomics::fail(gliomics::ErrorKind::config,
                     "gm_zscore: mask_kind must be 'volume' or 'nonzero'");
    }
  });
}

/* ---- feature extraction -------------------------------------------- */

gm_status gm_extract_features(const gm_volume* vol, gm_features** out) {
  return guarded([&] {
    const auto& labels = require_labels(vol, "gm_extract_features");
    gliomics::FeatureVector vec = gliomics::extract_all(labels);
    auto* f = new gm_features;
    f->names = gliomics::canonical_feature_names();
    f->values = std::move(vec.values);
    *out = f;
  });
}

size_t gm_features_count(const gm_features* f) { return f->values.size(); }

const char* gm_features_name(const gm_features* f, size_t i) {
  return i < f->names.size() ? f->names[i].c_str() : "";
}

double gm_features_value(const gm_features* f, size_t i) {
  return i < f->values.size() ? f->values[i] : 0.0;
}

void gm_features_free(gm_features* f) { delete f; }

gm_status gm_ric(const gm_volume* vol, double* ric, char** ellipsoids_json) {
  return guarded([&] {
    const auto& labels = require_labels(vol, "gm_ric");
    const gliomics::RicValue value = gliomics::relative_invasiveness(labels);
    *ric = value.ric;
    if (ellipsoids_json) {
      const json j = {{"ric", value.ric},
                      {"wt", ellipsoid_to_json(value.wt_ellipsoid)},
                      {"tc", ellipsoid_to_json(value.tc_ellipsoid)}};
      *ellipsoids_json = dup_string(j.dump(2));
    }
  });
}

/* ---- segmentation-side operations ----------------------------------- */

gm_status gm_fuse(const gm_volume* const* members, const double* weights,
                  size_t n_members, gm_volume** out) {
  return guarded([&] {
    std::vector<const gliomics::LabelVolume*> vols;
    vols.reserve(n_members);
    for (size_t i = 0; i < n_members; ++i)
      vols.push_back(&require_labels(members[i], "gm_fuse"));
    std::span<const double> w =
        weights ? std::span<const double>(weights, n_members)
                : std::span<const double>();
    *out = new gm_volume{gliomics::majority_vote(
        std::span<const gliomics::LabelVolume* const>(vols), w)};
  });
}

gm_status gm_postprocess(const gm_volume* seg, const gm_volume* t1gd,
                         const char* params_json, gm_volume** out) {
  return guarded([&] {
    const auto& labels = require_labels(seg, "gm_postprocess");
    const json j = parse_json(params_json, "postprocess params");
    gliomics::PostprocessParams params;
    params.min_wt_voxels = j.value("min_wt_voxels", params.min_wt_voxels);
    params.min_et_voxels = j.value("min_et_voxels", params.min_et_voxels);
    params.et_floor_voxels =
        j.value("et_floor_voxels", params.et_floor_voxels);
    params.intensity_filter =
        j.value("intensity_filter", params.intensity_filter);
    params.z_et = j.value("z_et", params.z_et);
    params.connectivity = j.value("connectivity", params.connectivity);
    const gliomics::IntensityVolume* intensity =
        t1gd ? &require_intensity(t1gd, "gm_postprocess") : nullptr;
    *out = new gm_volume{gliomics::postprocess(labels, intensity, params)};
  });
}

gm_status gm_seg_metrics(const gm_volume* pred, const gm_volume* ref,
                         int hd_percentile, char** report_json) {
  return guarded([&] {
    const gliomics::SegScore score =
        gliomics::seg_metrics(require_labels(pred, "gm_seg_metrics"),
                              require_labels(ref, "gm_seg_metrics"),
                              hd_percentile);
    const json j = {{"hd_percentile", score.hd_percentile},
                    {"ET", region_to_json(score.et)},
                    {"WT", region_to_json(score.wt)},
                    {"TC", region_to_json(score.tc)}};
    *report_json = dup_string(j.dump(2));
  });
}

/* ---- feature tables -------------------------------------------------- */

gm_status gm_table_read(const char* path, gm_table** out) {
  return guarded(
      [&] { *out = new gm_table{gliomics::read_feature_table(path)}; });
}

gm_status gm_table_write(const gm_table* table, const char* path) {
  return guarded([&] { gliomics::write_feature_table(table->value, path); });
}

void gm_table_free(gm_table* table) { delete table; }

size_t gm_table_rows(const gm_table* table) {
  return table->value.n_subjects();
}

const char* gm_table_subject(const gm_table* table, size_t row) {
  return row < table->value.subjects.size()
             ? table->value.subjects[row].c_str()
             : "";
}

gm_status gm_table_survival(const gm_table* table, double* out) {
  return guarded([&] {
    for (std::size_t i = 0; i < table->value.survival_days.size(); ++i)
      out[i] = table->value.survival_days[i];
  });
}

gm_status gm_table_filter_gtr(const gm_table* table, gm_table** out) {
  return guarded(
      [&] { *out = new gm_table{gliomics::filter_gtr(table->value)}; });
}

gm_status gm_extract_cohort(const char* root_dir, const char* params_json,
                            int threads, gm_table** out,
                            char** failures_json) {
  return guarded([&] {
    const json j = parse_json(params_json, "extract params");
    gliomics::ExtractOptions options;
    if (j.contains("mve")) {
      options.mve.tolerance =
          j.at("mve").value("tolerance", options.mve.tolerance);
      options.mve.max_iterations =
          j.at("mve").value("max_iterations", options.mve.max_iterations);
    }
    gliomics::CohortExtraction extraction =
        gliomics::extract_cohort(root_dir, options, threads);
    if (failures_json) {
      json failures = json::array();
      for (const auto& f : extraction.failures)
        failures.push_back({{"subject", f.subject}, {"reason", f.reason}});
      const json doc = {{"failures", failures},
                        {"warnings", extraction.warnings}};
      *failures_json = dup_string(doc.dump(2));
    }
    *out = new gm_table{std::move(extraction.table)};
  });
}

/* ---- selection, models, evaluation ----------------------------------- */

gm_status gm_select_features(const gm_table* table, const char* params_json,
                             char** report_json) {
  return guarded([&] {
    const json j = parse_json(params_json, "selection params");
    const gliomics::SelectParams params =
        gliomics::select_params_from_json(j);
    const std::uint64_t seed = j.value("seed", 0ULL);
    const int threads = j.value("threads", 1);
    const gliomics::SelectionReport report =
        gliomics::select_features(table->value, params, seed, threads);
    *report_json = dup_string(
        gliomics::selection_report_to_json(report).dump(2));
  });
}

gm_status gm_train(const gm_table* table, const char* spec_json,
                   unsigned long long seed, int threads, gm_model** out) {
  return guarded([&] {
    const gliomics::ModelSpec spec =
        gliomics::model_spec_from_json(parse_json(spec_json, "model spec"));
    *out = new gm_model{
        gliomics::train_model(table->value, spec, seed, threads)};
  });
}

gm_status gm_model_save(const gm_model* model, const char* path) {
  return guarded([&] { gliomics::save_model(model->value, path); });
}

gm_status gm_model_load(const char* path, gm_model** out) {
  return guarded([&] { *out = new gm_model{gliomics::load_model(path)}; });
}

void gm_model_free(gm_model* model) { delete model; }

gm_status gm_predict(const gm_model* model, const gm_table* table,
                     double** pred, size_t* n) {
  return guarded([&] {
    const std::vector<double> values =
        gliomics::predict(model->value, table->value);
    auto* buffer =
        static_cast<double*>(std::malloc(values.size() * sizeof(double)));
    std::memcpy(buffer, values.data(), values.size() * sizeof(double));
    *pred = buffer;
    *n = values.size();
  });
}

gm_status gm_evaluate(const double* pred, const double* truth, size_t n,
                      const char* params_json, char** report_json) {
  return guarded([&] {
    const json j = parse_json(params_json, "evaluate params");
    const gliomics::EvalReport report = gliomics::compute_metrics(
        std::span<const double>(pred, n), std::span<const double>(truth, n),
        thresholds_from_json(j));
    *report_json = dup_string(gliomics::eval_report_to_json(report).dump(2));
  });
}

gm_status gm_cross_validate(const gm_table* table, const char* spec_json,
                            int k, unsigned long long seed, int threads,
                            char** report_json) {
  return guarded([&] {
    const json j = parse_json(spec_json, "model spec");
    const gliomics::ModelSpec spec = gliomics::model_spec_from_json(j);
    gliomics::CvParams params;
    params.k = k;
    params.seed = seed;
    params.threads = threads;
    if (j.contains("thresholds"))
      params.thresholds = thresholds_from_json(j.at("thresholds"));
    const gliomics::CvResult result =
        gliomics::cross_validate(table->value, spec, params);
    json doc = gliomics::eval_report_to_json(result.report);
    doc["schema"] = "gliomics.cv.v1";
    doc["k"] = k;
    doc["seed"] = seed;
    *report_json = dup_string(doc.dump(2));
  });
}

gm_status gm_run_study(const char* config_json, char** report_json) {
  return guarded([&] {
    const gliomics::StudyConfig config = gliomics::study_config_from_json(
        parse_json(config_json, "study config"));
    const json report = gliomics::run_study(config);
    if (report_json) *report_json = dup_string(report.dump(2));
  });
}

/* ---- synthetic data --------------------------------------------------- */

gm_status gm_make_phantom(const char* params_json, gm_volume** out) {
  return guarded([&] {
    const json j = parse_json(params_json, "phantom params");
    gliomics::PhantomSpec spec;
    if (j.contains("wt_semiaxes")) {
      const auto a = j.at("wt_semiaxes").get<std::vector<double>>();
      if (a.size() != 3)
        gliomics::fail(gliomics::ErrorKind::config,
                       "wt_semiaxes must have 3 entries");
      spec.wt_semiaxes = {a[0], a[1], a[2]};
    }
    spec.ric = j.value("ric", spec.ric);
    if (j.contains("dims")) {
      const auto d = j.at("dims").get<std::vector<int>>();
      if (d.size() != 3)
        gliomics::fail(gliomics::ErrorKind::config, "dims must have 3 entries");
      spec.geom.nx = d[0];
      spec.geom.ny = d[1];
      spec.geom.nz = d[2];
    }
    if (j.contains("spacing")) {
      const auto s = j.at("spacing").get<std::vector<double>>();
      if (s.size() != 3)
        gliomics::fail(gliomics::ErrorKind::config,
                       "spacing must have 3 entries");
      spec.geom.sx = s[0];
      spec.geom.sy = s[1];
      spec.geom.sz = s[2];
    }
    if (j.contains("rotation_zyx")) {
      const auto r = j.at("rotation_zyx").get<std::vector<double>>();
      if (r.size() != 3)
        gliomics::fail(gliomics::ErrorKind::config,
                       "rotation_zyx must have 3 entries");
      spec.rotation = gliomics::rotation_zyx(r[0], r[1], r[2]);
    }
    *out = new gm_volume{gliomics::make_phantom(spec)};
  });
}

gm_status gm_make_cohort(const char* spec_json, const char* out_dir,
                         char** summary_json) {
  return guarded([&] {
    const json j = parse_json(spec_json, "cohort spec");
    gliomics::CohortSpec spec;
    spec.n_subjects = j.value("n_subjects", spec.n_subjects);
    if (j.contains("dims")) {
      const auto d = j.at("dims").get<std::vector<int>>();
      if (d.size() != 3)
        gliomics::fail(gliomics::ErrorKind::config, "dims must have 3 entries");
      spec.geom.nx = d[0];
      spec.geom.ny = d[1];
      spec.geom.nz = d[2];
    }
    if (j.contains("spacing")) {
      const auto s = j.at("spacing").get<std::vector<double>>();
      if (s.size() != 3)
        gliomics::fail(gliomics::ErrorKind::config,
                       "spacing must have 3 entries");
      spec.geom.sx = s[0];
      spec.geom.sy = s[1];
      spec.geom.sz = s[2];
    }
    auto range = [&](const char* key, std::array<double, 2>& target) {
      if (!j.contains(key)) return;
      const auto v = j.at(key).get<std::vector<double>>();
      if (v.size() != 2)
        gliomics::fail(gliomics::ErrorKind::config,
                       std::string(key) + " must have 2 entries");
      target = {v[0], v[1]};
    };
    range("wt_a1_range", spec.wt_a1_range);
    range("wt_a2_range", spec.wt_a2_range);
    range("wt_a3_range", spec.wt_a3_range);
    range("ric_range", spec.ric_range);
    range("age_range", spec.age_range);
    spec.beta0 = j.value("beta0", spec.beta0);
    spec.beta_age = j.value("beta_age", spec.beta_age);
    spec.beta_ric = j.value("beta_ric", spec.beta_ric);
    spec.noise_sd = j.value("noise_sd", spec.noise_sd);
    spec.gtr_fraction = j.value("gtr_fraction", spec.gtr_fraction);
    spec.rotate = j.value("rotate", spec.rotate);
    spec.write_t1gd = j.value("write_t1gd", spec.write_t1gd);
    if (!j.contains("seed"))
      gliomics::fail(gliomics::ErrorKind::config, "cohort spec requires a seed");
    spec.seed = j.at("seed").get<std::uint64_t>();

    const gliomics::CohortResult result = gliomics::make_cohort(spec, out_dir);
    if (summary_json) {
      const json doc = {{"n_subjects", result.rows.size()},
                        {"out_dir", out_dir},
                        {"warnings", result.warnings}};
      *summary_json = dup_string(doc.dump(2));
    }
  });
}

}  // extern "C"
