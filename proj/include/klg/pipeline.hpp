#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "klg/classify.hpp"
#include "klg/config.hpp"
#include "klg/klt.hpp"
#include "klg/raster.hpp"
#include "klg/segment.hpp"

namespace klg {

/// Intermediate rasters of one run, in pipeline order.
struct StageImages {
  BinaryMask skin;
  BinaryMask smoothed;
  BinaryMask blob;
  BinaryMask crop;
  BinaryMask edges;
  RgbImage eigen_overlay;
};

struct PipelineResult {
  Classification classification;
  KltFeatures features;
  CropRect crop;
  std::optional<StageImages> stages;
};

/// Skin mask -> majority smoothing -> biggest blob -> crop -> Canny ->
/// edge points -> K-L features -> classifier.
///
/// Failures are rethrown as StageError naming one of "raster", "segment",
/// "edges", "klt" or "classify".
class Pipeline {
 public:
  /// Validates the config and loads the gesture table / templates it names.
  explicit Pipeline(Config config);

  const Config& config() const noexcept { return config_; }
  const GestureTable& table() const noexcept { return table_; }
  const std::vector<Template>& templates() const noexcept { return templates_; }

  /// Runs up to feature extraction.
  KltFeatures extract(const RgbImage& img) const;

  PipelineResult run(const RgbImage& img, bool keep_stages = false) const;
  PipelineResult run(std::span<const std::uint8_t> pnm_bytes, bool keep_stages = false) const;

  Classification classify(const KltFeatures& f) const;

 private:
  KltFeatures extract_impl(const RgbImage& img, StageImages* stages) const;

  Config config_;
  GestureTable table_;
  std::vector<Template> templates_;
};

/// Decodes any supported PNM as colour; graymaps are replicated to RGB.
RgbImage decode_rgb(std::span<const std::uint8_t> pnm_bytes);

/// Zero border added around the cropped mask before edge detection, so the
/// outline closes where the hand touches the crop rectangle.
std::size_t edge_margin(const CannyParams& p) noexcept;

/// Edge raster in white with v1 (red) and v2 (green) drawn from the mean,
/// each scaled by the square root of its eigenvalue.
RgbImage render_eigen_overlay(const BinaryMask& edges, const KltFeatures& f);

inline constexpr const char* kStageFileNames[] = {
    "01_skin.pgm", "02_smoothed.pgm", "03_blob.pgm", "04_crop.pgm", "05_edges.pgm", "06_eigen_overlay.ppm",
};

/// Writes the six stage files into dir (created if missing).
void write_stage_dumps(const StageImages& stages, const std::string& dir);

}  // namespace klg
