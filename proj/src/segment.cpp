#include <algorithm>
#include <cmath>

#include "klg/segment.hpp"

namespace klg {

void SkinFilterParams::validate() const {
  auto bad = [](const char* what) { throw Error(Errc::InvalidConfig, what); };
  if (!(hue_lo >= 0.0 && hue_lo <= 360.0 && hue_hi >= 0.0 && hue_hi <= 360.0)) bad("skin hue outside [0, 360]");
  if (!(sat_lo >= 0.0 && sat_hi <= 1.0 && sat_lo <= sat_hi)) bad("skin saturation range invalid");
  if (!(val_lo >= 0.0 && val_hi <= 1.0 && val_lo <= val_hi)) bad("skin value range invalid");
  if (median_kernel < 1 || median_kernel % 2 == 0) bad("skin.median_kernel must be odd and >= 1");
  if (min_blob_area < 1) bad("skin.min_blob_area must be >= 1");
}

bool hue_in_range(double hue, double lo, double hi) noexcept {
  if (lo <= hi) return hue >= lo && hue <= hi;
  return hue >= lo || hue <= hi;
}

BinaryMask skin_mask(const RgbImage& img, const SkinFilterParams& p) {
  BinaryMask out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const HsvPixel hsv = rgb_to_hsv(img[i]);
    const bool skin = hue_in_range(hsv.h, p.hue_lo, p.hue_hi) && hsv.s >= p.sat_lo &&
                      hsv.s <= p.sat_hi && hsv.v >= p.val_lo && hsv.v <= p.val_hi;
    out[i] = skin ? 1 : 0;
  }
  return out;
}

BinaryMask median_smooth(const BinaryMask& m, int k) {
  if (k < 1 || k % 2 == 0) throw Error(Errc::InvalidArgument, "median kernel must be odd and >= 1");
  if (k == 1) return m;

  // Summed-area table makes each window count O(1).
  const std::size_t w = m.width();
  const std::size_t h = m.height();
  std::vector<std::size_t> integral((w + 1) * (h + 1), 0);
  for (std::size_t r = 0; r < h; ++r) {
    std::size_t row_sum = 0;
    for (std::size_t c = 0; c < w; ++c) {
      row_sum += m.at(r, c) ? 1 : 0;
      integral[(r + 1) * (w + 1) + c + 1] = integral[r * (w + 1) + c + 1] + row_sum;
    }
  }

  const std::size_t radius = static_cast<std::size_t>(k / 2);
  BinaryMask out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t r0 = r >= radius ? r - radius : 0;
    const std::size_t r1 = std::min(h - 1, r + radius);
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t c0 = c >= radius ? c - radius : 0;
      const std::size_t c1 = std::min(w - 1, c + radius);
      const std::size_t set = integral[(r1 + 1) * (w + 1) + c1 + 1] - integral[r0 * (w + 1) + c1 + 1] -
                              integral[(r1 + 1) * (w + 1) + c0] + integral[r0 * (w + 1) + c0];
      const std::size_t total = (r1 - r0 + 1) * (c1 - c0 + 1);
      out.at(r, c) = 2 * set > total ? 1 : 0;
    }
  }
  return out;
}

Raster<int> label_components(const BinaryMask& m) {
  const std::size_t w = m.width();
  const std::size_t h = m.height();
  Raster<int> labels(w, h, 0);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t start = 0; start < m.size(); ++start) {
    if (!m[start] || labels[start] != 0) continue;
    ++next;
    labels[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const std::size_t r = idx / w;
      const std::size_t c = idx % w;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if ((dr < 0 && r == 0) || (dc < 0 && c == 0) || (dr > 0 && r + 1 == h) || (dc > 0 && c + 1 == w)) continue;
          const std::size_t n = (r + dr) * w + (c + dc);
          if (m[n] && labels[n] == 0) {
            labels[n] = next;
            stack.push_back(n);
          }
        }
      }
    }
  }
  return labels;
}

std::vector<ConnectedComponent> connected_components(const BinaryMask& m) {
  const Raster<int> labels = label_components(m);
  std::vector<ConnectedComponent> comps;
  for (std::size_t r = 0; r < m.height(); ++r) {
    for (std::size_t c = 0; c < m.width(); ++c) {
      const int l = labels.at(r, c);
      if (l == 0) continue;
      if (static_cast<std::size_t>(l) > comps.size()) {
        comps.push_back(ConnectedComponent{l, 0, CropRect{r, r, c, c}});
      }
      auto& cc = comps[static_cast<std::size_t>(l - 1)];
      ++cc.area;
      cc.bbox.row_min = std::min(cc.bbox.row_min, r);
      cc.bbox.row_max = std::max(cc.bbox.row_max, r);
      cc.bbox.col_min = std::min(cc.bbox.col_min, c);
      cc.bbox.col_max = std::max(cc.bbox.col_max, c);
    }
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const ConnectedComponent& a, const ConnectedComponent& b) { return a.area > b.area; });
  return comps;
}

BinaryMask biggest_blob(const BinaryMask& m, std::size_t min_area) {
  const Raster<int> labels = label_components(m);
  std::vector<std::size_t> area;
  for (const int l : labels.pixels()) {
    if (l == 0) continue;
    if (static_cast<std::size_t>(l) > area.size()) area.resize(static_cast<std::size_t>(l), 0);
    ++area[static_cast<std::size_t>(l - 1)];
  }
  int best = 0;
  std::size_t best_area = 0;
  for (std::size_t i = 0; i < area.size(); ++i) {
    if (area[i] > best_area) {
      best_area = area[i];
      best = static_cast<int>(i + 1);
    }
  }
  if (best == 0 || best_area < min_area) {
    throw Error(Errc::NoSkinDetected, "largest component has " + std::to_string(best_area) + " pixels");
  }
  BinaryMask out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = labels[i] == best ? 1 : 0;
  return out;
}

Cropped crop_to_content(const BinaryMask& m) {
  // Scan inward from each side until a set pixel is met.
  const std::size_t w = m.width();
  const std::size_t h = m.height();
  auto row_has = [&](std::size_t r) {
    for (std::size_t c = 0; c < w; ++c) if (m.at(r, c)) return true;
    return false;
  };
  auto col_has = [&](std::size_t c) {
    for (std::size_t r = 0; r < h; ++r) if (m.at(r, c)) return true;
    return false;
  };

  std::size_t top = 0;
  while (top < h && !row_has(top)) ++top;
  if (top == h) throw Error(Errc::EmptyMask, "no foreground pixel to crop around");
  std::size_t bottom = h - 1;
  while (!row_has(bottom)) --bottom;
  std::size_t left = 0;
  while (!col_has(left)) ++left;
  std::size_t right = w - 1;
  while (!col_has(right)) --right;

  CropRect rect{top, bottom, left, right};
  BinaryMask out(rect.cols(), rect.rows());
  for (std::size_t r = 0; r < rect.rows(); ++r) {
    for (std::size_t c = 0; c < rect.cols(); ++c) out.at(r, c) = m.at(top + r, left + c);
  }
  return {std::move(out), rect};
}

}  // namespace klg
