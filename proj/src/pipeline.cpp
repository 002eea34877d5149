#include <cmath>
#include <filesystem>

#include "klg/edges.hpp"
#include "klg/pipeline.hpp"

namespace klg {

namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

GestureTable load_table(const Config& c) {
  if (c.table_path.empty()) return GestureTable::standard();
  const auto bytes = read_file(c.table_path);
  return GestureTable::from_json(std::string(bytes.begin(), bytes.end()));
}

std::vector<Template> load_templates(const Config& c, const GestureTable& table) {
  if (c.templates_path.empty()) return midpoint_templates(table, 1.0);
  const auto bytes = read_file(c.templates_path);
  return templates_from_json(std::string(bytes.begin(), bytes.end()));
}

BinaryMask pad(const BinaryMask& m, std::size_t margin) {
  BinaryMask out(m.width() + 2 * margin, m.height() + 2 * margin);
  for (std::size_t r = 0; r < m.height(); ++r) {
    for (std::size_t c = 0; c < m.width(); ++c) out.at(r + margin, c + margin) = m.at(r, c);
  }
  return out;
}

void draw_segment(RgbImage& img, Vec2 from, Vec2 to, Rgb color) {
  const double top = static_cast<double>(img.height() - 1);
  const double x0 = from.x;
  const double y0 = top - from.y;
  const double x1 = to.x;
  const double y1 = top - to.y;
  const int steps = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const long c = std::lround(x0 + t * (x1 - x0));
    const long r = std::lround(y0 + t * (y1 - y0));
    if (r < 0 || c < 0 || r >= static_cast<long>(img.height()) || c >= static_cast<long>(img.width())) continue;
    img.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = color;
  }
}

}  // namespace

Pipeline::Pipeline(Config config)
    : config_(std::move(config)),
      table_(GestureTable::standard()) {
  config_.validate();
  table_ = load_table(config_);
  templates_ = load_templates(config_, table_);
}

std::size_t edge_margin(const CannyParams& p) noexcept {
  return static_cast<std::size_t>(p.kernel_size / 2) + 2;
}

RgbImage decode_rgb(std::span<const std::uint8_t> pnm_bytes) {
  AnyImage any = load_pnm(pnm_bytes);
  if (auto* rgb = std::get_if<RgbImage>(&any)) return std::move(*rgb);
  const auto& gray = std::get<GrayImage>(any);
  RgbImage out(gray.width(), gray.height());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const auto v = static_cast<std::uint8_t>(gray[i]);
    out[i] = Rgb{v, v, v};
  }
  return out;
}

RgbImage render_eigen_overlay(const BinaryMask& edges, const KltFeatures& f) {
  RgbImage img(edges.width(), edges.height());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i]) img[i] = Rgb{255, 255, 255};
  }
  const double l1 = std::sqrt(f.lambda1);
  const double l2 = std::sqrt(f.lambda2);
  const Vec2 v1 = f.v1();
  const Vec2 v2 = f.v2();
  draw_segment(img, f.mean, {f.mean.x + l2 * v2.x, f.mean.y + l2 * v2.y}, Rgb{0, 255, 0});
  draw_segment(img, f.mean, {f.mean.x + l1 * v1.x, f.mean.y + l1 * v1.y}, Rgb{255, 0, 0});
  return img;
}

KltFeatures Pipeline::extract_impl(const RgbImage& img, StageImages* stages) const {
  const SkinFilterParams& sp = config_.skin;
  BinaryMask skin = stage("segment", [&] { return skin_mask(img, sp); });
  BinaryMask smoothed = stage("segment", [&] { return median_smooth(skin, sp.median_kernel); });
  BinaryMask blob = stage("segment", [&] { return biggest_blob(smoothed, sp.min_blob_area); });
  Cropped cropped = stage("segment", [&] { return crop_to_content(blob); });

  const CannyResult edges = stage("edges", [&] {
    const BinaryMask padded = pad(cropped.mask, edge_margin(config_.canny));
    return canny(mask_to_gray(padded), config_.canny);
  });
  if (edges.degenerate) throw StageError("edges", Error(Errc::DegenerateImage, "no gradient in cropped mask"));

  KltFeatures features = stage("klt", [&] { return klt_features(edge_points(edges.edges)); });

  if (stages) {
    stages->skin = std::move(skin);
    stages->smoothed = std::move(smoothed);
    stages->blob = std::move(blob);
    stages->crop = cropped.mask;
    stages->edges = edges.edges;
    stages->eigen_overlay = render_eigen_overlay(edges.edges, features);
  }
  return features;
}

KltFeatures Pipeline::extract(const RgbImage& img) const { return extract_impl(img, nullptr); }

Classification Pipeline::classify(const KltFeatures& f) const {
  return stage("classify", [&] {
    if (config_.mode == ClassifierMode::Angle) return classify_angle(f.theta_deg, table_);
    return classify_nn(f.theta_deg, f.eccentricity, templates_, config_.weights, config_.reject_distance);
  });
}

PipelineResult Pipeline::run(const RgbImage& img, bool keep_stages) const {
  PipelineResult res;
  if (keep_stages) {
    StageImages stages{BinaryMask(1, 1), BinaryMask(1, 1), BinaryMask(1, 1),
                       BinaryMask(1, 1), BinaryMask(1, 1), RgbImage(1, 1)};
    res.features = extract_impl(img, &stages);
    res.stages = std::move(stages);
  } else {
    res.features = extract_impl(img, nullptr);
  }
  res.classification = classify(res.features);
  return res;
}

PipelineResult Pipeline::run(std::span<const std::uint8_t> pnm_bytes, bool keep_stages) const {
  const RgbImage img = stage("raster", [&] { return decode_rgb(pnm_bytes); });
  return run(img, keep_stages);
}

void write_stage_dumps(const StageImages& s, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  write_file((base / kStageFileNames[0]).string(), save_pnm(s.skin));
  write_file((base / kStageFileNames[1]).string(), save_pnm(s.smoothed));
  write_file((base / kStageFileNames[2]).string(), save_pnm(s.blob));
  write_file((base / kStageFileNames[3]).string(), save_pnm(s.crop));
  write_file((base / kStageFileNames[4]).string(), save_pnm(s.edges));
  write_file((base / kStageFileNames[5]).string(), save_pnm(s.eigen_overlay));
}

}  // namespace klg
