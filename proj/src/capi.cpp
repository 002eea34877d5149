#include "klg/klg.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "klg/config.hpp"
#include "klg/error.hpp"
#include "klg/evaluate.hpp"
#include "klg/pipeline.hpp"
#include "klg/synth.hpp"

struct klg_config {
  klg::Config config;
};

struct klg_result {
  std::optional<std::string> label;
  double theta = 0.0;
  double eccentricity = 0.0;
  double score = 0.0;
};

struct klg_report {
  std::string json;
  std::string table;
  double accuracy = 0.0;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t rejected = 0;
};

namespace {

thread_local std::string g_last_error;

klg_status fail(klg_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the active exception to a status. A failure while decoding the image
// is the caller's input; later stages are pipeline failures.
klg_status translate() {
  try {
    throw;
  } catch (const klg::StageError& e) {
    return fail(e.stage() == "raster" ? KLG_INPUT_ERROR : KLG_PIPELINE_ERROR, e.what());
  } catch (const klg::Error& e) {
    return fail(KLG_INPUT_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KLG_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(KLG_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(KLG_INTERNAL_ERROR, "unknown error");
  }
}

template <class F>
klg_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return KLG_OK;
  } catch (...) {
    return translate();
  }
}

bool missing(const void* p, const char* what, klg_status& status) {
  if (p != nullptr) return false;
  status = fail(KLG_INPUT_ERROR, std::string("InvalidArgument (") + what + " is null)");
  return true;
}

klg_result* make_result(const klg::PipelineResult& r) {
  auto* out = new klg_result;
  out->label = r.classification.label;
  out->theta = r.features.theta_deg;
  out->eccentricity = r.features.eccentricity;
  out->score = r.classification.score;
  return out;
}

}  // namespace

extern "C" {

const char* klg_last_error(void) { return g_last_error.c_str(); }

const char* klg_version(void) { return "0.1.0"; }

klg_status klg_config_create(klg_config** out) {
  klg_status st;
  if (missing(out, "out", st)) return st;
  return guarded([&] { *out = new klg_config; });
}

void klg_config_destroy(klg_config* cfg) { delete cfg; }

klg_status klg_config_load_file(klg_config* cfg, const char* path) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(path, "path", st)) return st;
  return guarded([&] { cfg->config.apply_file(path); });
}

klg_status klg_config_set(klg_config* cfg, const char* key, const char* value) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(key, "key", st) || missing(value, "value", st)) return st;
  return guarded([&] { cfg->config.set(key, value); });
}

klg_status klg_config_get(const klg_config* cfg, const char* key, char* buf, size_t len, size_t* needed) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(key, "key", st)) return st;
  return guarded([&] {
    const std::string v = cfg->config.get(key);
    if (needed != nullptr) *needed = v.size();
    if (buf != nullptr && len > 0) {
      const std::size_t n = v.size() < len - 1 ? v.size() : len - 1;
      std::memcpy(buf, v.data(), n);
      buf[n] = '\0';
    }
  });
}

size_t klg_config_key_count(void) { return klg::Config::keys().size(); }

const char* klg_config_key_at(size_t i) {
  const auto& keys = klg::Config::keys();
  return i < keys.size() ? keys[i].c_str() : nullptr;
}

klg_status klg_classify_file(const klg_config* cfg, const char* path, const char* dump_dir, klg_result** out) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(path, "path", st) || missing(out, "out", st)) return st;
  return guarded([&] {
    const klg::Pipeline pipeline(cfg->config);
    const auto bytes = klg::read_file(path);
    const auto r = pipeline.run(bytes, dump_dir != nullptr);
    if (dump_dir != nullptr) klg::write_stage_dumps(*r.stages, dump_dir);
    *out = make_result(r);
  });
}

klg_status klg_classify_bytes(const klg_config* cfg, const uint8_t* data, size_t len, klg_result** out) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(data, "data", st) || missing(out, "out", st)) return st;
  return guarded([&] {
    const klg::Pipeline pipeline(cfg->config);
    *out = make_result(pipeline.run(std::span<const std::uint8_t>(data, len)));
  });
}

void klg_result_destroy(klg_result* res) { delete res; }

int klg_result_accepted(const klg_result* res) { return res != nullptr && res->label.has_value() ? 1 : 0; }

const char* klg_result_label(const klg_result* res) {
  return res != nullptr && res->label ? res->label->c_str() : nullptr;
}

double klg_result_theta(const klg_result* res) { return res != nullptr ? res->theta : 0.0; }

double klg_result_eccentricity(const klg_result* res) { return res != nullptr ? res->eccentricity : 0.0; }

double klg_result_score(const klg_result* res) { return res != nullptr ? res->score : 0.0; }

klg_status klg_evaluate(const klg_config* cfg, const char* dir, const char* labels_csv, klg_report** out) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(dir, "dir", st) || missing(labels_csv, "labels_csv", st) ||
      missing(out, "out", st))
    return st;
  return guarded([&] {
    const klg::Pipeline pipeline(cfg->config);
    const auto report = klg::evaluate(dir, labels_csv, pipeline);
    auto* rep = new klg_report;
    rep->json = report.to_json();
    rep->table = report.to_table();
    rep->accuracy = report.overall_accuracy();
    rep->total = report.total();
    rep->correct = report.correct();
    rep->rejected = report.rejected();
    *out = rep;
  });
}

void klg_report_destroy(klg_report* rep) { delete rep; }

const char* klg_report_json(const klg_report* rep) { return rep != nullptr ? rep->json.c_str() : ""; }

const char* klg_report_table(const klg_report* rep) { return rep != nullptr ? rep->table.c_str() : ""; }

double klg_report_accuracy(const klg_report* rep) { return rep != nullptr ? rep->accuracy : 0.0; }

size_t klg_report_total(const klg_report* rep) { return rep != nullptr ? rep->total : 0; }

size_t klg_report_correct(const klg_report* rep) { return rep != nullptr ? rep->correct : 0; }

size_t klg_report_rejected(const klg_report* rep) { return rep != nullptr ? rep->rejected : 0; }

klg_status klg_synthesize(const klg_config* cfg, const char* label, size_t count, double noise_deg, uint64_t seed,
                          const char* out_dir) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(label, "label", st) || missing(out_dir, "out_dir", st)) return st;
  return guarded([&] {
    const klg::Pipeline pipeline(cfg->config);
    klg::write_synthetic(klg::generate_synthetic(pipeline.table(), label, count, noise_deg, seed), out_dir);
  });
}

klg_status klg_calibrate(const klg_config* cfg, const char* dir, const char* labels_csv, double margin_deg,
                         const char* out_path, klg_warning_fn warn, void* user) {
  klg_status st;
  if (missing(cfg, "cfg", st) || missing(dir, "dir", st) || missing(labels_csv, "labels_csv", st) ||
      missing(out_path, "out_path", st))
    return st;
  return guarded([&] {
    const klg::Pipeline pipeline(cfg->config);
    const auto outcome = klg::calibrate_dataset(dir, labels_csv, margin_deg, pipeline);
    const std::string text = outcome.calibrated.table.to_json();
    klg::write_file(out_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    if (warn != nullptr)
      for (const auto& w : outcome.warnings) warn(w.c_str(), user);
  });
}

}  // extern "C"
