#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "klg/error.hpp"

namespace klg {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major raster with at least one pixel. Immutable in spirit: the pipeline
/// stages take rasters by const reference and return fresh ones.
template <class T>
class Raster {
 public:
  using value_type = T;

  Raster(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(checked_count(width, height), fill) {}

  Raster(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != checked_count(width, height)) {
      throw Error(Errc::InvalidArgument, "pixel count does not match dimensions");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& at(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const T& at(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static std::size_t checked_count(std::size_t w, std::size_t h) {
    if (w == 0 || h == 0) throw Error(Errc::InvalidArgument, "raster dimensions must be >= 1");
    return w * h;
  }

  std::size_t width_;
  std::size_t height_;
  std::vector<T> data_;
};

using RgbImage = Raster<Rgb>;
/// Real-valued intensities, >= 0.
using GrayImage = Raster<double>;
/// 1 = foreground (white), 0 = background.
using BinaryMask = Raster<std::uint8_t>;

std::size_t count_true(const BinaryMask& m) noexcept;

/// 0/1 mask to 0/255 intensities.
GrayImage mask_to_gray(const BinaryMask& m);

struct HsvPixel {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

/// Hexcone HSV. Hue is 0 wherever it is undefined (max == min), and negative
/// hues from the red sector are wrapped into [0, 360).
HsvPixel rgb_to_hsv(Rgb px) noexcept;

// ---------------------------------------------------------------------------
// PNM

enum class PnmEncoding { Ascii, Binary };

using AnyImage = std::variant<RgbImage, GrayImage, BinaryMask>;

struct PnmReadOptions {
  /// Return P2/P5 input as a BinaryMask; fails with NotBinary unless every
  /// sample is 0 or maxval.
  bool gray_as_mask = false;
};

/// Parses P2/P3/P5/P6. Samples are rescaled to 0..255 when maxval < 255.
/// Throws PnmError naming the byte offset of the failure.
AnyImage load_pnm(std::span<const std::uint8_t> bytes, PnmReadOptions opts = {});

std::vector<std::uint8_t> save_pnm(const RgbImage& img, PnmEncoding enc = PnmEncoding::Binary);
/// Intensities are rounded and clamped to 0..255.
std::vector<std::uint8_t> save_pnm(const GrayImage& img, PnmEncoding enc = PnmEncoding::Binary);
/// Written as graymap with 0 / 255 samples.
std::vector<std::uint8_t> save_pnm(const BinaryMask& img, PnmEncoding enc = PnmEncoding::Binary);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace klg
