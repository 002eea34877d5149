#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "klg/edges.hpp"

namespace klg {

void CannyParams::validate() const {
  if (!(sigma > 0.0)) throw Error(Errc::InvalidConfig, "canny.sigma must be > 0");
  if (kernel_size < 3 || kernel_size % 2 == 0) throw Error(Errc::InvalidConfig, "canny.kernel_size must be odd and >= 3");
  if (!(tl_frac > 0.0 && th_frac < 1.0 && tl_frac < th_frac)) {
    throw Error(Errc::InvalidConfig, "canny thresholds need 0 < tl_frac < th_frac < 1");
  }
}

GrayImage gaussian_kernel(double sigma, int size) {
  if (size < 1 || size % 2 == 0) throw Error(Errc::InvalidArgument, "kernel size must be odd");
  if (!(sigma > 0.0)) throw Error(Errc::InvalidArgument, "sigma must be > 0");
  const int radius = size / 2;
  const auto n = static_cast<std::size_t>(size);
  GrayImage k(n, n);
  double sum = 0.0;
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      const double w = std::exp(-static_cast<double>(x * x + y * y) / (2.0 * sigma * sigma));
      k.at(static_cast<std::size_t>(y + radius), static_cast<std::size_t>(x + radius)) = w;
      sum += w;
    }
  }
  for (double& w : k.pixels()) w /= sum;
  return k;
}

namespace {

inline std::size_t clamp_index(long i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

}  // namespace

GrayImage convolve(const GrayImage& img, const GrayImage& kernel) {
  const long kr = static_cast<long>(kernel.height() / 2);
  const long kc = static_cast<long>(kernel.width() / 2);
  GrayImage out(img.width(), img.height());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < kernel.height(); ++i) {
        const std::size_t rr = clamp_index(static_cast<long>(r) + static_cast<long>(i) - kr, img.height());
        for (std::size_t j = 0; j < kernel.width(); ++j) {
          const std::size_t cc = clamp_index(static_cast<long>(c) + static_cast<long>(j) - kc, img.width());
          acc += kernel.at(i, j) * img.at(rr, cc);
        }
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

GradientField gradient(const GrayImage& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  const double tan_lo = std::tan(std::numbers::pi / 8.0);
  const double tan_hi = std::tan(3.0 * std::numbers::pi / 8.0);

  GradientField g{GrayImage(w, h), Raster<DirectionBin>(w, h, DirectionBin::Deg0)};
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t up = clamp_index(static_cast<long>(r) - 1, h);
    const std::size_t dn = clamp_index(static_cast<long>(r) + 1, h);
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t lf = clamp_index(static_cast<long>(c) - 1, w);
      const std::size_t rt = clamp_index(static_cast<long>(c) + 1, w);
      const double gx = (img.at(up, rt) + 2.0 * img.at(r, rt) + img.at(dn, rt)) -
                        (img.at(up, lf) + 2.0 * img.at(r, lf) + img.at(dn, lf));
      const double gy = (img.at(dn, lf) + 2.0 * img.at(dn, c) + img.at(dn, rt)) -
                        (img.at(up, lf) + 2.0 * img.at(up, c) + img.at(up, rt));
      g.magnitude.at(r, c) = std::sqrt(gx * gx + gy * gy);

      const double ax = std::abs(gx);
      const double ay = std::abs(gy);
      DirectionBin bin;
      if (gx == 0.0 && gy == 0.0) {
        bin = DirectionBin::Deg0;
      } else if (ay < tan_lo * ax) {
        bin = DirectionBin::Deg0;
      } else if (ay > tan_hi * ax) {
        bin = DirectionBin::Deg90;
      } else {
        bin = (gx > 0.0) == (gy > 0.0) ? DirectionBin::Deg45 : DirectionBin::Deg135;
      }
      g.direction.at(r, c) = bin;
    }
  }
  return g;
}

GrayImage non_max_suppress(const GradientField& g) {
  const GrayImage& mag = g.magnitude;
  const long w = static_cast<long>(mag.width());
  const long h = static_cast<long>(mag.height());
  auto value = [&](long r, long c) {
    if (r < 0 || c < 0 || r >= h || c >= w) return 0.0;
    return mag.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };

  // Equal magnitudes are ties up to rounding: mirrored pixels of a symmetric
  // input accumulate their sums in different orders.
  const double peak = *std::max_element(mag.pixels().begin(), mag.pixels().end());
  const double tol = kTieTolerance * peak;

  GrayImage out(mag.width(), mag.height());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      long dr = 0;
      long dc = 0;
      switch (g.direction.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c))) {
        case DirectionBin::Deg0: dc = 1; break;
        case DirectionBin::Deg45: dr = 1; dc = 1; break;
        case DirectionBin::Deg90: dr = 1; break;
        case DirectionBin::Deg135: dr = 1; dc = -1; break;
      }
      const double m = value(r, c);
      const bool keep = m + tol >= value(r + dr, c + dc) && m + tol >= value(r - dr, c - dc);
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = keep ? m : 0.0;
    }
  }
  return out;
}

BinaryMask hysteresis(const GrayImage& nms, double tl, double th) {
  const std::size_t w = nms.width();
  const std::size_t h = nms.height();
  BinaryMask out(w, h);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < nms.size(); ++i) {
    if (nms[i] >= th && nms[i] >= tl && !out[i]) {
      out[i] = 1;
      stack.push_back(i);
    }
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const std::size_t r = idx / w;
      const std::size_t c = idx % w;
      const std::size_t r0 = r == 0 ? 0 : r - 1;
      const std::size_t c0 = c == 0 ? 0 : c - 1;
      const std::size_t r1 = std::min(h - 1, r + 1);
      const std::size_t c1 = std::min(w - 1, c + 1);
      for (std::size_t rr = r0; rr <= r1; ++rr) {
        for (std::size_t cc = c0; cc <= c1; ++cc) {
          const std::size_t n = rr * w + cc;
          if (!out[n] && nms[n] >= tl) {
            out[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
  }
  return out;
}

CannyResult canny(const GrayImage& img, const CannyParams& p) {
  p.validate();
  const GrayImage smoothed = convolve(img, gaussian_kernel(p.sigma, p.kernel_size));
  const GrayImage nms = non_max_suppress(gradient(smoothed));
  const double max_mag = *std::max_element(nms.pixels().begin(), nms.pixels().end());

  CannyResult res{BinaryMask(img.width(), img.height()), max_mag, false};
  if (max_mag <= 0.0) {
    res.degenerate = true;
    return res;
  }
  res.edges = hysteresis(nms, p.tl_frac * max_mag, p.th_frac * max_mag);
  return res;
}

}  // namespace klg
