#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "klg/classify.hpp"
#include "klg/raster.hpp"

namespace klg {

/// Geometry of the synthetic hand: a rectangular palm, wide across the
/// gesture direction, with one finger sticking out along it. The outline is
/// elongated and its mass is lopsided toward the palm, so the projected third
/// moment points at the fingertip. Every side is parallel or perpendicular to
/// the gesture axis, which keeps mirrored halves of the outline rasterizing
/// alike.
struct HandShape {
  std::size_t image_size = 256;
  /// Palm half-extent along the finger.
  double palm_half_depth = 16.0;
  /// Palm half-extent across the finger.
  double palm_half_width = 55.0;
  /// Palm centre to fingertip.
  double finger_length = 160.0;
  double finger_half_width = 8.0;
  Rgb skin{224, 172, 138};
  Rgb background{40, 70, 110};
};

/// Renders the hand with its finger pointing at theta_deg (counter-clockwise
/// from +x, y up). Pixel centres inside the shape get the skin colour.
RgbImage render_hand(double theta_deg, const HandShape& shape = {});

struct SyntheticSample {
  std::string filename;
  std::string label;
  /// Ground-truth finger direction, (-180, 180].
  double theta_deg = 0.0;
  RgbImage image;
};

/// Deterministic in seed: the angle of sample i is the label's interval
/// midpoint plus noise_deg times the i-th standard normal draw of a
/// mt19937_64 stream. Throws UnknownLabel if the table has no such label.
std::vector<SyntheticSample> generate_synthetic(const GestureTable& table, const std::string& label,
                                                std::size_t count, double noise_deg, std::uint64_t seed,
                                                const HandShape& shape = {});

/// Lower-case, spaces to underscores ("THUMBS DOWN" -> "thumbs_down").
std::string label_slug(const std::string& label);

/// Writes each sample as binary PPM and merges its rows into labels.csv
/// (filename,label) and truth.csv (filename,label,theta) in out_dir.
void write_synthetic(const std::vector<SyntheticSample>& samples, const std::string& out_dir);

}  // namespace klg
