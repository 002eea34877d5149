#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "klg/error.hpp"

namespace klg {

/// Closed angle interval [lo, hi] in degrees for one gesture.
struct GestureClass {
  std::string label;
  double lo = 0.0;
  double hi = 0.0;

  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// Ordered gesture intervals; lookup is first match in row order.
class GestureTable {
 public:
  /// Rows with lo > hi are normalized by swapping. Throws InvalidConfig on
  /// empty or duplicate labels.
  explicit GestureTable(std::vector<GestureClass> rows);

  /// The ten-gesture angle table: UP, DOWN, LEFT, RIGHT, VICTORY, THREE, FOUR,
  /// SMALL, THUMBS DOWN, LITTLE.
  static GestureTable standard();

  static GestureTable from_json(const std::string& text);
  std::string to_json() const;

  const std::vector<GestureClass>& rows() const noexcept { return rows_; }
  const GestureClass* find(const std::string& label) const noexcept;

 private:
  std::vector<GestureClass> rows_;
};

struct Template {
  std::string label;
  double theta_deg = 0.0;
  double eccentricity = 0.0;
};

std::vector<Template> templates_from_json(const std::string& text);
std::string templates_to_json(std::span<const Template> templates);

/// One template per table row at the interval midpoint.
std::vector<Template> midpoint_templates(const GestureTable& table, double eccentricity);

struct Classification {
  /// Empty when the classifier rejected the input.
  std::optional<std::string> label;
  /// Angle classifier: degrees from theta to the nearest boundary of the
  /// matched interval (for a rejection, to the nearest interval of any row).
  /// Nearest-template classifier: the winning distance.
  double score = 0.0;

  bool accepted() const noexcept { return label.has_value(); }
};

Classification classify_angle(double theta_deg, const GestureTable& table);

/// Signed difference a - b wrapped into (-180, 180].
double angular_difference(double a_deg, double b_deg) noexcept;

struct NnWeights {
  double theta = 1.0;
  double eccentricity = 0.0;
};

/// Weighted Euclidean nearest template over (theta, eccentricity), with the
/// angle term wrapped. Ties go to the earliest template.
Classification classify_nn(double theta_deg, double eccentricity, std::span<const Template> templates,
                           NnWeights weights, std::optional<double> reject_distance = std::nullopt);

struct LabeledFeature {
  std::string label;
  double theta_deg = 0.0;
  double eccentricity = 0.0;
};

/// Circular mean of theta and arithmetic mean of eccentricity per label, in
/// order of first appearance.
std::vector<Template> build_templates(std::span<const LabeledFeature> samples);

struct LabeledAngle {
  std::string label;
  double theta_deg = 0.0;
};

struct CalibratedTable {
  GestureTable table;
  std::vector<std::string> warnings;
};

/// [min - margin, max + margin] per label, rows in order of first appearance.
/// Overlapping rows are kept and reported in warnings.
CalibratedTable calibrate_table(std::span<const LabeledAngle> samples, double margin);

}  // namespace klg
