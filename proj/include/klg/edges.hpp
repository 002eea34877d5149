#pragma once

#include <cstdint>

#include "klg/raster.hpp"

namespace klg {

struct CannyParams {
  double sigma = 1.4;
  int kernel_size = 5;
  /// Hysteresis thresholds as fractions of the largest suppressed magnitude.
  double tl_frac = 0.10;
  double th_frac = 0.20;

  void validate() const;
};

/// Gradient direction quantized modulo 180 degrees. Angles are measured in
/// image coordinates (x to the right, y down the rows).
enum class DirectionBin : std::uint8_t { Deg0, Deg45, Deg90, Deg135 };

struct GradientField {
  GrayImage magnitude;
  Raster<DirectionBin> direction;
};

/// size x size weights proportional to exp(-(x^2 + y^2) / (2 sigma^2)),
/// normalized to unit sum. size must be odd.
GrayImage gaussian_kernel(double sigma, int size);

/// Direct 2-D correlation with replicated-edge padding.
GrayImage convolve(const GrayImage& img, const GrayImage& kernel);

/// 3x3 Sobel responses with replicated-edge padding.
GradientField gradient(const GrayImage& img);

/// Relative tolerance (of the peak magnitude) under which two magnitudes
/// count as equal in non-maximum suppression.
inline constexpr double kTieTolerance = 1e-9;

/// Keeps a magnitude iff it is >= both neighbours along its direction bin
/// (out-of-bounds neighbours count as 0). Ties are kept.
GrayImage non_max_suppress(const GradientField& g);

/// Pixels >= tl that are 8-connected through pixels >= tl to some pixel >= th.
BinaryMask hysteresis(const GrayImage& nms, double tl, double th);

struct CannyResult {
  BinaryMask edges;
  double max_magnitude = 0.0;
  /// Set when the suppressed gradient is identically zero; edges is empty.
  bool degenerate = false;
};

CannyResult canny(const GrayImage& img, const CannyParams& p);

}  // namespace klg
