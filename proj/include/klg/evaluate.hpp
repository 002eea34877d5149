#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "klg/classify.hpp"
#include "klg/pipeline.hpp"

namespace klg {

struct LabeledFile {
  std::string filename;
  std::string label;
};

/// Reads a "filename,label" CSV (header required).
std::vector<LabeledFile> read_labels_csv(const std::string& path);
/// Writes the CSV, header included, rows in the given order.
std::string format_labels_csv(const std::vector<LabeledFile>& rows);

/// Outcome for one image of a batch.
struct EvalRecord {
  std::string filename;
  std::string truth;
  std::optional<std::string> predicted;  // empty = rejected
  std::optional<double> theta_deg;       // empty when a stage failed
  std::string error;                     // "<stage>: <Errc>" when a stage failed
};

struct ClassRate {
  std::string label;
  std::size_t total = 0;
  std::size_t correct = 0;
  double success_rate = 0.0;
};

class EvalReport {
 public:
  /// Builds the confusion matrix. Columns are the classifier's labels in table
  /// order, then any unseen truth labels, then "Rejected"; rows are the truth
  /// labels present in the records, in column order.
  EvalReport(const std::vector<EvalRecord>& records, const std::vector<std::string>& classifier_labels,
             std::vector<std::pair<std::string, std::string>> config_echo);

  const std::vector<ClassRate>& per_class() const noexcept { return per_class_; }
  const std::vector<std::string>& row_labels() const noexcept { return rows_; }
  const std::vector<std::string>& column_labels() const noexcept { return cols_; }
  const std::vector<std::vector<std::size_t>>& confusion() const noexcept { return confusion_; }
  const std::vector<EvalRecord>& records() const noexcept { return records_; }

  std::size_t total() const noexcept;
  std::size_t correct() const noexcept;
  std::size_t rejected() const noexcept;
  double overall_accuracy() const noexcept;

  std::string to_json() const;
  /// Human-readable "Symbol / Total numbers / Correct numbers / Success rate".
  std::string to_table() const;

 private:
  std::vector<EvalRecord> records_;
  std::vector<ClassRate> per_class_;
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<std::vector<std::size_t>> confusion_;
  std::vector<std::pair<std::string, std::string>> config_echo_;
};

/// Classifies every image named in the labels file. Stage failures count as
/// rejections. Throws Io listing every missing file, InvalidArgument for an
/// empty labels file.
EvalReport evaluate(const std::string& dir, const std::string& labels_csv, const Pipeline& pipeline);

struct CalibrationOutcome {
  CalibratedTable calibrated;
  /// Per-file failures and interval overlaps.
  std::vector<std::string> warnings;
};

/// Measures theta for every readable image and fits [min - margin,
/// max + margin] per label. Fails with EmptySampleSet only if some label
/// loses every sample.
CalibrationOutcome calibrate_dataset(const std::string& dir, const std::string& labels_csv, double margin,
                                     const Pipeline& pipeline);

}  // namespace klg
