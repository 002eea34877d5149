#pragma once

#include <cstddef>
#include <vector>

#include "klg/raster.hpp"

namespace klg {

/// HSV box used to accept skin pixels. A hue interval with hue_lo > hue_hi
/// wraps through 0 degrees.
struct SkinFilterParams {
  double hue_lo = 0.0;
  double hue_hi = 50.0;
  double sat_lo = 0.20;
  double sat_hi = 0.70;
  double val_lo = 0.30;
  double val_hi = 1.00;
  int median_kernel = 5;
  std::size_t min_blob_area = 100;

  /// Throws InvalidConfig when a range or the kernel is malformed.
  void validate() const;
};

struct CropRect {
  std::size_t row_min = 0;
  std::size_t row_max = 0;
  std::size_t col_min = 0;
  std::size_t col_max = 0;

  std::size_t rows() const noexcept { return row_max - row_min + 1; }
  std::size_t cols() const noexcept { return col_max - col_min + 1; }

  friend bool operator==(const CropRect&, const CropRect&) = default;
};

struct ConnectedComponent {
  int label = 0;
  std::size_t area = 0;
  CropRect bbox;
};

bool hue_in_range(double hue, double lo, double hi) noexcept;

BinaryMask skin_mask(const RgbImage& img, const SkinFilterParams& p);

/// Binary majority filter over a k x k window clipped at the borders; a pixel
/// turns on only with a strict majority of set pixels in its window.
BinaryMask median_smooth(const BinaryMask& m, int k);

/// 8-connected components. Labels follow raster order of each component's
/// first pixel; the list is sorted by area descending, then label ascending.
std::vector<ConnectedComponent> connected_components(const BinaryMask& m);

/// Per-pixel component labels (0 = background) matching connected_components.
Raster<int> label_components(const BinaryMask& m);

/// Keeps only the largest component. Throws NoSkinDetected when no component
/// reaches min_area.
BinaryMask biggest_blob(const BinaryMask& m, std::size_t min_area);

struct Cropped {
  BinaryMask mask;
  CropRect rect;
};

/// Tight bounding box of the set pixels. Throws EmptyMask on an empty mask.
Cropped crop_to_content(const BinaryMask& m);

}  // namespace klg
