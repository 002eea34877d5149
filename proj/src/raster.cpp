#include <algorithm>

#include "klg/raster.hpp"

namespace klg {

std::size_t count_true(const BinaryMask& m) noexcept {
  return static_cast<std::size_t>(std::count_if(m.pixels().begin(), m.pixels().end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

GrayImage mask_to_gray(const BinaryMask& m) {
  GrayImage out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 255.0 : 0.0;
  return out;
}

HsvPixel rgb_to_hsv(Rgb px) noexcept {
  const int r = px.r;
  const int g = px.g;
  const int b = px.b;
  const int max = std::max({r, g, b});
  const int min = std::min({r, g, b});
  const double delta = max - min;

  HsvPixel out;
  out.v = max / 255.0;
  out.s = max == 0 ? 0.0 : delta / max;
  if (delta == 0) return out;

  double h;
  if (max == r) {
    h = 60.0 * ((g - b) / delta);
  } else if (max == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

}  // namespace klg
