// klgesture: classify, evaluate, synthesize and calibrate hand gestures.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "klg/klg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitPipeline = 2;

struct ConfigDeleter {
  void operator()(klg_config* c) const { klg_config_destroy(c); }
};
struct ResultDeleter {
  void operator()(klg_result* r) const { klg_result_destroy(r); }
};
struct ReportDeleter {
  void operator()(klg_report* r) const { klg_report_destroy(r); }
};
using ConfigPtr = std::unique_ptr<klg_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<klg_result, ResultDeleter>;
using ReportPtr = std::unique_ptr<klg_report, ReportDeleter>;

int report_failure(klg_status st) {
  std::cerr << "error: " << klg_last_error() << "\n";
  return st == KLG_PIPELINE_ERROR ? kExitPipeline : kExitInput;
}

struct ConfigOptions {
  std::string path;
  std::vector<std::string> overrides;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", path, "Key-value config file");
    cmd->add_option("--set", overrides, "Override one config key (key=value); repeatable");
  }

  // Defaults, then the file, then --set flags.
  std::optional<ConfigPtr> build(int& exit_code) const {
    klg_config* raw = nullptr;
    if (klg_status st = klg_config_create(&raw); st != KLG_OK) {
      exit_code = report_failure(st);
      return std::nullopt;
    }
    ConfigPtr cfg(raw);
    if (!path.empty()) {
      if (klg_status st = klg_config_load_file(cfg.get(), path.c_str()); st != KLG_OK) {
        exit_code = report_failure(st);
        return std::nullopt;
      }
    }
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
        exit_code = kExitInput;
        return std::nullopt;
      }
      const std::string key = kv.substr(0, eq);
      const std::string value = kv.substr(eq + 1);
      if (klg_status st = klg_config_set(cfg.get(), key.c_str(), value.c_str()); st != KLG_OK) {
        exit_code = report_failure(st);
        return std::nullopt;
      }
    }
    return cfg;
  }
};

int run_classify(const ConfigOptions& co, const std::string& image, const std::string& dump_dir) {
  int code = kExitOk;
  auto cfg = co.build(code);
  if (!cfg) return code;
  klg_result* raw = nullptr;
  const klg_status st = klg_classify_file(cfg->get(), image.c_str(), dump_dir.empty() ? nullptr : dump_dir.c_str(), &raw);
  if (st != KLG_OK) return report_failure(st);
  ResultPtr res(raw);
  if (klg_result_accepted(res.get())) {
    std::printf("label=%s theta=%.4f ecc=%.4f\n", klg_result_label(res.get()), klg_result_theta(res.get()),
                klg_result_eccentricity(res.get()));
  } else {
    std::printf("rejected theta=%.4f\n", klg_result_theta(res.get()));
  }
  return kExitOk;
}

int run_batch(const ConfigOptions& co, const std::string& dir, const std::string& labels, const std::string& out) {
  int code = kExitOk;
  auto cfg = co.build(code);
  if (!cfg) return code;
  klg_report* raw = nullptr;
  const klg_status st = klg_evaluate(cfg->get(), dir.c_str(), labels.c_str(), &raw);
  if (st != KLG_OK) return report_failure(st);
  ReportPtr rep(raw);
  std::fputs(klg_report_table(rep.get()), stdout);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    f << klg_report_json(rep.get());
    if (!f) {
      std::cerr << "error: Io (cannot write " << out << ")\n";
      return kExitInput;
    }
  }
  return kExitOk;
}

int run_synth(const ConfigOptions& co, const std::string& label, std::size_t count, double noise,
              std::uint64_t seed, const std::string& out) {
  int code = kExitOk;
  auto cfg = co.build(code);
  if (!cfg) return code;
  const klg_status st = klg_synthesize(cfg->get(), label.c_str(), count, noise, seed, out.c_str());
  if (st != KLG_OK) return report_failure(st);
  std::printf("wrote %zu image(s) to %s\n", count, out.c_str());
  return kExitOk;
}

void print_warning(const char* message, void*) { std::cerr << "warning: " << message << "\n"; }

int run_calibrate(const ConfigOptions& co, const std::string& dir, const std::string& labels, double margin,
                  const std::string& out) {
  int code = kExitOk;
  auto cfg = co.build(code);
  if (!cfg) return code;
  const klg_status st =
      klg_calibrate(cfg->get(), dir.c_str(), labels.c_str(), margin, out.c_str(), &print_warning, nullptr);
  if (st != KLG_OK) return report_failure(st);
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand gesture recognition from principal edge orientation"};
  app.set_version_flag("--version", klg_version());
  app.require_subcommand(1);

  ConfigOptions classify_cfg, batch_cfg, synth_cfg, calibrate_cfg;

  std::string image, dump_dir;
  auto* classify = app.add_subcommand("classify", "Classify one PNM image");
  classify->add_option("image", image, "Input image (PPM/PGM)")->required();
  classify->add_option("--dump-stages", dump_dir, "Write the six intermediate stage images here");
  classify_cfg.add_to(classify);

  std::string batch_dir, batch_labels, report_path;
  auto* batch = app.add_subcommand("batch", "Evaluate a labelled directory of images");
  batch->add_option("dir", batch_dir, "Image directory")->required();
  batch->add_option("--labels", batch_labels, "CSV with header filename,label")->required();
  batch->add_option("--report", report_path, "Write the JSON report here");
  batch_cfg.add_to(batch);

  std::string synth_label, synth_out;
  std::size_t synth_count = 0;
  double synth_noise = 0.0;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Generate synthetic gesture images");
  synth->add_option("--class", synth_label, "Gesture label")->required();
  synth->add_option("--count", synth_count, "Number of images")->required()->check(CLI::PositiveNumber);
  synth->add_option("--noise", synth_noise, "Angle noise standard deviation in degrees")->required()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_seed, "Random seed")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth_cfg.add_to(synth);

  std::string cal_dir, cal_labels, cal_out;
  double cal_margin = 0.0;
  auto* calibrate = app.add_subcommand("calibrate", "Fit a gesture table to a labelled dataset");
  calibrate->add_option("dir", cal_dir, "Image directory")->required();
  calibrate->add_option("--labels", cal_labels, "CSV with header filename,label")->required();
  calibrate->add_option("--margin", cal_margin, "Degrees added on both sides of each interval")->required()
      ->check(CLI::NonNegativeNumber);
  calibrate->add_option("--out", cal_out, "Output table JSON")->required();
  calibrate_cfg.add_to(calibrate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*classify) return run_classify(classify_cfg, image, dump_dir);
  if (*batch) return run_batch(batch_cfg, batch_dir, batch_labels, report_path);
  if (*synth) return run_synth(synth_cfg, synth_label, synth_count, synth_noise, synth_seed, synth_out);
  return run_calibrate(calibrate_cfg, cal_dir, cal_labels, cal_margin, cal_out);
}
