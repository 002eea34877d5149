#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>

#include "klg/evaluate.hpp"
#include "klg/synth.hpp"

namespace klg {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

/// Box-Muller on raw mt19937_64 output; std::normal_distribution is not
/// reproducible across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

double wrap180(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

}  // namespace

RgbImage render_hand(double theta_deg, const HandShape& s) {
  const double ux = std::cos(theta_deg * kDeg);
  const double uy = std::sin(theta_deg * kDeg);
  const double centre = 0.5 * static_cast<double>(s.image_size - 1);
  // Centre the shape's extent [-palm_half_depth, finger_length] on the image.
  const double offset = 0.5 * (s.finger_length - s.palm_half_depth);
  const double ox = centre - offset * ux;
  const double oy = centre - offset * uy;

  RgbImage img(s.image_size, s.image_size, s.background);
  const double top = static_cast<double>(s.image_size - 1);
  for (std::size_t r = 0; r < s.image_size; ++r) {
    for (std::size_t c = 0; c < s.image_size; ++c) {
      const double dx = static_cast<double>(c) - ox;
      const double dy = (top - static_cast<double>(r)) - oy;
      const double along = dx * ux + dy * uy;
      const double across = -dx * uy + dy * ux;
      const bool palm = std::abs(along) <= s.palm_half_depth && std::abs(across) <= s.palm_half_width;
      const bool finger = along >= 0.0 && along <= s.finger_length && std::abs(across) <= s.finger_half_width;
      if (palm || finger) img.at(r, c) = s.skin;
    }
  }
  return img;
}

std::string label_slug(const std::string& label) {
  std::string out;
  for (const char ch : label) {
    out += std::isspace(static_cast<unsigned char>(ch)) ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

std::vector<SyntheticSample> generate_synthetic(const GestureTable& table, const std::string& label,
                                                std::size_t count, double noise_deg, std::uint64_t seed,
                                                const HandShape& shape) {
  const GestureClass* row = table.find(label);
  if (!row) throw Error(Errc::UnknownLabel, "no gesture named '" + label + "'");
  if (count < 1) throw Error(Errc::InvalidArgument, "count must be >= 1");
  if (!(noise_deg >= 0.0)) throw Error(Errc::InvalidArgument, "noise must be >= 0");

  NormalStream normal(seed);
  std::vector<SyntheticSample> out;
  out.reserve(count);
  const std::string slug = label_slug(label);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = wrap180(row->midpoint() + noise_deg * normal.next());
    char name[64];
    std::snprintf(name, sizeof name, "_%03zu.ppm", i);
    out.push_back({slug + name, label, theta, render_hand(theta, shape)});
  }
  return out;
}

void write_synthetic(const std::vector<SyntheticSample>& samples, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + out_dir + ": " + ec.message());
  const fs::path base(out_dir);

  for (const auto& s : samples) write_file((base / s.filename).string(), save_pnm(s.image));

  // Merge with whatever earlier runs wrote; rows are keyed and sorted by filename.
  std::map<std::string, std::string> labels;
  const fs::path labels_path = base / "labels.csv";
  if (fs::exists(labels_path)) {
    for (auto& row : read_labels_csv(labels_path.string())) labels[row.filename] = row.label;
  }
  std::map<std::string, std::string> truth;
  const fs::path truth_path = base / "truth.csv";
  if (fs::exists(truth_path)) {
    const auto bytes = read_file(truth_path.string());
    std::string text(bytes.begin(), bytes.end());
    std::size_t pos = text.find('\n');
    while (pos != std::string::npos && pos + 1 < text.size()) {
      const std::size_t end = text.find('\n', pos + 1);
      const std::string line = text.substr(pos + 1, end == std::string::npos ? std::string::npos : end - pos - 1);
      if (const auto comma = line.find(','); comma != std::string::npos) truth[line.substr(0, comma)] = line.substr(comma + 1);
      pos = end;
    }
  }
  for (const auto& s : samples) {
    labels[s.filename] = s.label;
    char theta[64];
    std::snprintf(theta, sizeof theta, "%.9f", s.theta_deg);
    truth[s.filename] = s.label + "," + theta;
  }

  std::vector<LabeledFile> rows;
  for (const auto& [f, l] : labels) rows.push_back({f, l});
  const std::string csv = format_labels_csv(rows);
  write_file(labels_path.string(), std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));

  std::string truth_csv = "filename,label,theta\n";
  for (const auto& [f, rest] : truth) truth_csv += f + "," + rest + "\n";
  write_file(truth_path.string(),
             std::span(reinterpret_cast<const std::uint8_t*>(truth_csv.data()), truth_csv.size()));
}

}  // namespace klg
