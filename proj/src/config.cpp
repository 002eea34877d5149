#include <charconv>
#include <cmath>

#include "klg/config.hpp"

namespace klg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw Error(Errc::InvalidConfig, std::string(key) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

long long parse_int(std::string_view key, std::string_view text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(Errc::InvalidConfig, std::string(key) + ": not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> k = {
      "skin.hue_lo",        "skin.hue_hi",       "skin.sat_lo",           "skin.sat_hi",
      "skin.val_lo",        "skin.val_hi",       "skin.median_kernel",    "skin.min_blob_area",
      "canny.sigma",        "canny.kernel_size", "canny.tl_frac",         "canny.th_frac",
      "classify.mode",      "classify.table_path", "classify.templates_path", "classify.w_theta",
      "classify.w_ecc",     "classify.reject_distance",
  };
  return k;
}

void Config::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "skin.hue_lo") skin.hue_lo = parse_double(key, value);
  else if (key == "skin.hue_hi") skin.hue_hi = parse_double(key, value);
  else if (key == "skin.sat_lo") skin.sat_lo = parse_double(key, value);
  else if (key == "skin.sat_hi") skin.sat_hi = parse_double(key, value);
  else if (key == "skin.val_lo") skin.val_lo = parse_double(key, value);
  else if (key == "skin.val_hi") skin.val_hi = parse_double(key, value);
  else if (key == "skin.median_kernel") skin.median_kernel = static_cast<int>(parse_int(key, value));
  else if (key == "skin.min_blob_area") {
    const long long a = parse_int(key, value);
    if (a < 1) throw Error(Errc::InvalidConfig, "skin.min_blob_area must be >= 1");
    skin.min_blob_area = static_cast<std::size_t>(a);
  }
  else if (key == "canny.sigma") canny.sigma = parse_double(key, value);
  else if (key == "canny.kernel_size") canny.kernel_size = static_cast<int>(parse_int(key, value));
  else if (key == "canny.tl_frac") canny.tl_frac = parse_double(key, value);
  else if (key == "canny.th_frac") canny.th_frac = parse_double(key, value);
  else if (key == "classify.mode") {
    if (value == "angle") mode = ClassifierMode::Angle;
    else if (value == "nn") mode = ClassifierMode::Nearest;
    else throw Error(Errc::InvalidConfig, "classify.mode must be 'angle' or 'nn'");
  }
  else if (key == "classify.table_path") table_path = std::string(value);
  else if (key == "classify.templates_path") templates_path = std::string(value);
  else if (key == "classify.w_theta") weights.theta = parse_double(key, value);
  else if (key == "classify.w_ecc") weights.eccentricity = parse_double(key, value);
  else if (key == "classify.reject_distance") {
    if (value.empty() || value == "none") reject_distance.reset();
    else reject_distance = parse_double(key, value);
  }
  else throw Error(Errc::InvalidConfig, "unknown config key '" + std::string(key) + "'");
}

std::string Config::get(std::string_view key) const {
  if (key == "skin.hue_lo") return format_number(skin.hue_lo);
  if (key == "skin.hue_hi") return format_number(skin.hue_hi);
  if (key == "skin.sat_lo") return format_number(skin.sat_lo);
  if (key == "skin.sat_hi") return format_number(skin.sat_hi);
  if (key == "skin.val_lo") return format_number(skin.val_lo);
  if (key == "skin.val_hi") return format_number(skin.val_hi);
  if (key == "skin.median_kernel") return std::to_string(skin.median_kernel);
  if (key == "skin.min_blob_area") return std::to_string(skin.min_blob_area);
  if (key == "canny.sigma") return format_number(canny.sigma);
  if (key == "canny.kernel_size") return std::to_string(canny.kernel_size);
  if (key == "canny.tl_frac") return format_number(canny.tl_frac);
  if (key == "canny.th_frac") return format_number(canny.th_frac);
  if (key == "classify.mode") return mode == ClassifierMode::Angle ? "angle" : "nn";
  if (key == "classify.table_path") return table_path;
  if (key == "classify.templates_path") return templates_path;
  if (key == "classify.w_theta") return format_number(weights.theta);
  if (key == "classify.w_ecc") return format_number(weights.eccentricity);
  if (key == "classify.reject_distance") return reject_distance ? format_number(*reject_distance) : "none";
  throw Error(Errc::InvalidConfig, "unknown config key '" + std::string(key) + "'");
}

void Config::apply_text(std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void Config::apply_file(const std::string& path) {
  const auto bytes = read_file(path);
  apply_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void Config::validate() const {
  skin.validate();
  canny.validate();
  if (weights.theta < 0.0 || weights.eccentricity < 0.0 || (weights.theta == 0.0 && weights.eccentricity == 0.0)) {
    throw Error(Errc::InvalidConfig, "classify.w_theta / classify.w_ecc must be >= 0 and not both zero");
  }
  if (reject_distance && *reject_distance < 0.0) {
    throw Error(Errc::InvalidConfig, "classify.reject_distance must be >= 0");
  }
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) out.emplace_back(k, get(k));
  return out;
}

}  // namespace klg
