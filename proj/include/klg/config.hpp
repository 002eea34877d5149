#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "klg/classify.hpp"
#include "klg/edges.hpp"
#include "klg/segment.hpp"

namespace klg {

enum class ClassifierMode { Angle, Nearest };

/// Every tunable of the pipeline. Keys are flat ("skin.hue_lo",
/// "canny.sigma", "classify.mode", ...); see Config::keys().
struct Config {
  SkinFilterParams skin;
  CannyParams canny;
  ClassifierMode mode = ClassifierMode::Angle;
  std::string table_path;      // empty: built-in ten-gesture table
  std::string templates_path;  // empty: table midpoints
  NnWeights weights;
  std::optional<double> reject_distance;

  static const std::vector<std::string>& keys();

  /// Throws InvalidConfig for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  /// Applies "key = value" lines; '#' starts a comment.
  void apply_text(std::string_view text);
  void apply_file(const std::string& path);

  void validate() const;

  /// (key, canonical value) for every key, in keys() order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Shortest decimal text that round-trips the double.
std::string format_number(double v);

}  // namespace klg
