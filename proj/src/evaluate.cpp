#include <algorithm>
#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "klg/evaluate.hpp"

namespace klg {

using json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t index_of(const std::vector<std::string>& v, const std::string& s) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
}

const std::string kRejected = "Rejected";

}  // namespace

std::vector<LabeledFile> read_labels_csv(const std::string& path) {
  const auto bytes = read_file(path);
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::vector<LabeledFile> rows;
  bool header = true;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw Error(Errc::InvalidArgument, path + ":" + std::to_string(line_no) + ": expected filename,label");
    }
    const auto name = trim(line.substr(0, comma));
    const auto label = trim(line.substr(comma + 1));
    if (header) {
      if (name != "filename" || label != "label") {
        throw Error(Errc::InvalidArgument, path + ": header must be 'filename,label'");
      }
      header = false;
      continue;
    }
    if (name.empty() || label.empty()) {
      throw Error(Errc::InvalidArgument, path + ":" + std::to_string(line_no) + ": empty filename or label");
    }
    rows.push_back({std::string(name), std::string(label)});
  }
  if (header) throw Error(Errc::InvalidArgument, path + ": missing 'filename,label' header");
  return rows;
}

std::string format_labels_csv(const std::vector<LabeledFile>& rows) {
  std::string out = "filename,label\n";
  for (const auto& r : rows) out += r.filename + "," + r.label + "\n";
  return out;
}

EvalReport::EvalReport(const std::vector<EvalRecord>& records, const std::vector<std::string>& classifier_labels,
                       std::vector<std::pair<std::string, std::string>> config_echo)
    : records_(records), config_echo_(std::move(config_echo)) {
  cols_ = classifier_labels;
  for (const auto& r : records_) {
    if (index_of(cols_, r.truth) == cols_.size()) cols_.push_back(r.truth);
  }
  for (const auto& r : records_) {
    if (r.predicted && index_of(cols_, *r.predicted) == cols_.size()) cols_.push_back(*r.predicted);
  }
  for (const auto& c : cols_) {
    const bool present =
        std::any_of(records_.begin(), records_.end(), [&](const EvalRecord& r) { return r.truth == c; });
    if (present) rows_.push_back(c);
  }
  cols_.push_back(kRejected);

  confusion_.assign(rows_.size(), std::vector<std::size_t>(cols_.size(), 0));
  per_class_.resize(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) per_class_[i].label = rows_[i];
  for (const auto& r : records_) {
    const std::size_t row = index_of(rows_, r.truth);
    const std::size_t col = r.predicted ? index_of(cols_, *r.predicted) : cols_.size() - 1;
    ++confusion_[row][col];
    ++per_class_[row].total;
    if (r.predicted && *r.predicted == r.truth) ++per_class_[row].correct;
  }
  for (auto& pc : per_class_) {
    pc.success_rate = pc.total ? static_cast<double>(pc.correct) / static_cast<double>(pc.total) : 0.0;
  }
}

std::size_t EvalReport::total() const noexcept { return records_.size(); }

std::size_t EvalReport::correct() const noexcept {
  std::size_t n = 0;
  for (const auto& pc : per_class_) n += pc.correct;
  return n;
}

std::size_t EvalReport::rejected() const noexcept {
  std::size_t n = 0;
  for (const auto& row : confusion_) n += row.back();
  return n;
}

double EvalReport::overall_accuracy() const noexcept {
  return total() ? static_cast<double>(correct()) / static_cast<double>(total()) : 0.0;
}

std::string EvalReport::to_json() const {
  json doc;
  doc["overall_accuracy"] = overall_accuracy();
  doc["total"] = total();
  doc["correct"] = correct();
  doc["rejected"] = rejected();

  json per_class = json::array();
  for (const auto& pc : per_class_) {
    per_class.push_back(
        {{"label", pc.label}, {"total", pc.total}, {"correct", pc.correct}, {"success_rate", pc.success_rate}});
  }
  doc["per_class"] = std::move(per_class);

  json matrix = json::array();
  for (const auto& row : confusion_) matrix.push_back(row);
  doc["confusion"] = {{"rows", rows_}, {"columns", cols_}, {"matrix", std::move(matrix)}};

  json failures = json::array();
  for (const auto& r : records_) {
    if (!r.error.empty()) failures.push_back({{"filename", r.filename}, {"error", r.error}});
  }
  doc["failures"] = std::move(failures);

  json echo = json::object();
  for (const auto& [k, v] : config_echo_) echo[k] = v;
  doc["config_echo"] = std::move(echo);
  return doc.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
  std::size_t width = 6;
  for (const auto& pc : per_class_) width = std::max(width, pc.label.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %13s  %15s  %12s\n", static_cast<int>(width), "Symbol", "Total numbers",
                "Correct numbers", "Success rate");
  out += buf;
  for (const auto& pc : per_class_) {
    std::snprintf(buf, sizeof buf, "%-*s  %13zu  %15zu  %11.0f%%\n", static_cast<int>(width), pc.label.c_str(),
                  pc.total, pc.correct, 100.0 * pc.success_rate);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "overall %zu/%zu = %.2f%%, rejected %zu\n", correct(), total(),
                100.0 * overall_accuracy(), rejected());
  out += buf;
  return out;
}

namespace {

std::vector<LabeledFile> checked_labels(const std::string& labels_csv) {
  auto labels = read_labels_csv(labels_csv);
  if (labels.empty()) throw Error(Errc::InvalidArgument, "dataset is empty: " + labels_csv);
  return labels;
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

EvalReport evaluate(const std::string& dir, const std::string& labels_csv, const Pipeline& pipeline) {
  const auto labels = checked_labels(labels_csv);
  std::string missing;
  for (const auto& l : labels) {
    if (!std::filesystem::is_regular_file(path_in(dir, l.filename))) {
      missing += missing.empty() ? "" : ", ";
      missing += l.filename;
    }
  }
  if (!missing.empty()) throw Error(Errc::Io, "missing image file(s): " + missing);

  std::vector<EvalRecord> records;
  records.reserve(labels.size());
  for (const auto& l : labels) {
    EvalRecord rec{l.filename, l.label, std::nullopt, std::nullopt, {}};
    try {
      const auto bytes = read_file(path_in(dir, l.filename));
      const PipelineResult res = pipeline.run(bytes);
      rec.predicted = res.classification.label;
      rec.theta_deg = res.features.theta_deg;
    } catch (const Error& e) {
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }

  std::vector<std::string> classifier_labels;
  if (pipeline.config().mode == ClassifierMode::Angle) {
    for (const auto& row : pipeline.table().rows()) classifier_labels.push_back(row.label);
  } else {
    for (const auto& t : pipeline.templates()) {
      if (index_of(classifier_labels, t.label) == classifier_labels.size()) classifier_labels.push_back(t.label);
    }
  }
  return EvalReport(records, classifier_labels, pipeline.config().entries());
}

CalibrationOutcome calibrate_dataset(const std::string& dir, const std::string& labels_csv, double margin,
                                     const Pipeline& pipeline) {
  const auto labels = checked_labels(labels_csv);
  CalibrationOutcome out{{GestureTable::standard(), {}}, {}};
  std::vector<LabeledAngle> samples;
  std::vector<std::string> wanted;
  for (const auto& l : labels) {
    if (index_of(wanted, l.label) == wanted.size()) wanted.push_back(l.label);
    try {
      const auto bytes = read_file(path_in(dir, l.filename));
      const RgbImage img = [&] {
        try {
          return decode_rgb(bytes);
        } catch (const Error& e) {
          throw StageError("raster", e);
        }
      }();
      samples.push_back({l.label, pipeline.extract(img).theta_deg});
    } catch (const Error& e) {
      out.warnings.push_back(l.filename + ": " + e.what());
    }
  }
  for (const auto& label : wanted) {
    const bool kept = std::any_of(samples.begin(), samples.end(), [&](const LabeledAngle& s) { return s.label == label; });
    if (!kept) throw Error(Errc::EmptySampleSet, "label " + label + " has no usable samples");
  }
  out.calibrated = calibrate_table(samples, margin);
  out.warnings.insert(out.warnings.end(), out.calibrated.warnings.begin(), out.calibrated.warnings.end());
  return out;
}

}  // namespace klg
