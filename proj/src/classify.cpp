#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include <json.hpp>

#include "klg/classify.hpp"

namespace klg {

using json = nlohmann::ordered_json;

GestureTable::GestureTable(std::vector<GestureClass> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw Error(Errc::InvalidConfig, "gesture table has no rows");
  std::unordered_set<std::string> seen;
  for (auto& row : rows_) {
    if (row.label.empty()) throw Error(Errc::InvalidConfig, "gesture label is empty");
    if (!seen.insert(row.label).second) throw Error(Errc::InvalidConfig, "duplicate gesture label " + row.label);
    if (!std::isfinite(row.lo) || !std::isfinite(row.hi)) {
      throw Error(Errc::InvalidConfig, "non-finite bound for " + row.label);
    }
    if (row.lo > row.hi) std::swap(row.lo, row.hi);
  }
}

GestureTable GestureTable::standard() {
  return GestureTable({
      {"UP", 22.0, 30.0},
      {"DOWN", -12.0, -7.0},
      {"LEFT", 79.0, 81.0},
      {"RIGHT", -101.0, -100.0},
      {"VICTORY", -7.0, -5.0},
      {"THREE", -4.0, -0.6},
      {"FOUR", 0.0, 8.0},
      {"SMALL", -106.0, -103.0},
      {"THUMBS DOWN", -66.9, -44.0},
      {"LITTLE", -69.0, -67.0},
  });
}

const GestureClass* GestureTable::find(const std::string& label) const noexcept {
  for (const auto& row : rows_) {
    if (row.label == label) return &row;
  }
  return nullptr;
}

namespace {

json parse_array(const std::string& text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidConfig, std::string(what) + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(Errc::InvalidConfig, std::string(what) + ": expected a JSON array");
  return doc;
}

template <class T>
T field(const json& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(Errc::InvalidConfig, std::string(what) + ": entry missing \"" + key + "\"");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::InvalidConfig, std::string(what) + ": bad type for \"" + key + "\"");
  }
}

double wrap180(double deg) noexcept {
  double d = std::fmod(deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

}  // namespace

GestureTable GestureTable::from_json(const std::string& text) {
  const json doc = parse_array(text, "gesture table");
  std::vector<GestureClass> rows;
  for (const auto& e : doc) {
    rows.push_back({field<std::string>(e, "label", "gesture table"), field<double>(e, "lo", "gesture table"),
                    field<double>(e, "hi", "gesture table")});
  }
  return GestureTable(std::move(rows));
}

std::string GestureTable::to_json() const {
  json doc = json::array();
  for (const auto& row : rows_) doc.push_back({{"label", row.label}, {"lo", row.lo}, {"hi", row.hi}});
  return doc.dump(2) + "\n";
}

std::vector<Template> templates_from_json(const std::string& text) {
  const json doc = parse_array(text, "templates");
  std::vector<Template> out;
  for (const auto& e : doc) {
    Template t{field<std::string>(e, "label", "templates"), field<double>(e, "theta", "templates"),
               field<double>(e, "eccentricity", "templates")};
    if (t.label.empty()) throw Error(Errc::InvalidConfig, "templates: empty label");
    if (!(t.eccentricity >= 0.0 && t.eccentricity <= 1.0)) {
      throw Error(Errc::InvalidConfig, "templates: eccentricity outside [0, 1] for " + t.label);
    }
    out.push_back(std::move(t));
  }
  if (out.empty()) throw Error(Errc::EmptyTemplateSet, "templates file has no entries");
  return out;
}

std::string templates_to_json(std::span<const Template> templates) {
  json doc = json::array();
  for (const auto& t : templates) {
    doc.push_back({{"label", t.label}, {"theta", t.theta_deg}, {"eccentricity", t.eccentricity}});
  }
  return doc.dump(2) + "\n";
}

std::vector<Template> midpoint_templates(const GestureTable& table, double eccentricity) {
  std::vector<Template> out;
  for (const auto& row : table.rows()) out.push_back({row.label, row.midpoint(), eccentricity});
  return out;
}

Classification classify_angle(double theta_deg, const GestureTable& table) {
  for (const auto& row : table.rows()) {
    if (row.lo <= theta_deg && theta_deg <= row.hi) {
      return {row.label, std::min(theta_deg - row.lo, row.hi - theta_deg)};
    }
  }
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows()) {
    nearest = std::min({nearest, std::abs(theta_deg - row.lo), std::abs(theta_deg - row.hi)});
  }
  return {std::nullopt, nearest};
}

double angular_difference(double a_deg, double b_deg) noexcept { return wrap180(a_deg - b_deg); }

Classification classify_nn(double theta_deg, double eccentricity, std::span<const Template> templates,
                           NnWeights weights, std::optional<double> reject_distance) {
  if (templates.empty()) throw Error(Errc::EmptyTemplateSet, "no templates to match against");
  if (weights.theta < 0.0 || weights.eccentricity < 0.0 || (weights.theta == 0.0 && weights.eccentricity == 0.0)) {
    throw Error(Errc::InvalidArgument, "nn weights must be >= 0 and not both zero");
  }
  const Template* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& t : templates) {
    const double da = angular_difference(theta_deg, t.theta_deg);
    const double de = eccentricity - t.eccentricity;
    const double dist = std::sqrt(weights.theta * da * da + weights.eccentricity * de * de);
    if (dist < best_dist) {
      best_dist = dist;
      best = &t;
    }
  }
  if (reject_distance && best_dist > *reject_distance) return {std::nullopt, best_dist};
  return {best->label, best_dist};
}

std::vector<Template> build_templates(std::span<const LabeledFeature> samples) {
  if (samples.empty()) throw Error(Errc::EmptySampleSet, "no samples to build templates from");
  struct Acc {
    std::string label;
    double sin_sum = 0.0;
    double cos_sum = 0.0;
    double ecc_sum = 0.0;
    std::size_t n = 0;
  };
  std::vector<Acc> acc;
  for (const auto& s : samples) {
    auto it = std::find_if(acc.begin(), acc.end(), [&](const Acc& a) { return a.label == s.label; });
    if (it == acc.end()) {
      acc.push_back({s.label});
      it = acc.end() - 1;
    }
    const double rad = s.theta_deg * std::numbers::pi / 180.0;
    it->sin_sum += std::sin(rad);
    it->cos_sum += std::cos(rad);
    it->ecc_sum += s.eccentricity;
    ++it->n;
  }
  std::vector<Template> out;
  for (const auto& a : acc) {
    const double theta = wrap180(std::atan2(a.sin_sum, a.cos_sum) * 180.0 / std::numbers::pi);
    out.push_back({a.label, theta, a.ecc_sum / static_cast<double>(a.n)});
  }
  return out;
}

CalibratedTable calibrate_table(std::span<const LabeledAngle> samples, double margin) {
  if (samples.empty()) throw Error(Errc::EmptySampleSet, "no samples to calibrate from");
  if (!(margin >= 0.0)) throw Error(Errc::InvalidArgument, "margin must be >= 0");
  std::vector<GestureClass> rows;
  for (const auto& s : samples) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const GestureClass& r) { return r.label == s.label; });
    if (it == rows.end()) {
      rows.push_back({s.label, s.theta_deg, s.theta_deg});
    } else {
      it->lo = std::min(it->lo, s.theta_deg);
      it->hi = std::max(it->hi, s.theta_deg);
    }
  }
  for (auto& r : rows) {
    r.lo -= margin;
    r.hi += margin;
  }

  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double lo = std::max(rows[i].lo, rows[j].lo);
      const double hi = std::min(rows[i].hi, rows[j].hi);
      if (lo <= hi) {
        warnings.push_back("intervals for " + rows[i].label + " and " + rows[j].label + " overlap on [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]; " + rows[i].label +
                           " wins in table order");
      }
    }
  }
  return {GestureTable(std::move(rows)), std::move(warnings)};
}

}  // namespace klg
