#pragma once

#include <span>
#include <vector>

#include "klg/raster.hpp"

namespace klg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Row-major 2x2 matrix.
struct Mat2 {
  double m00 = 0.0;
  double m01 = 0.0;
  double m10 = 0.0;
  double m11 = 0.0;

  double trace() const noexcept { return m00 + m11; }
  double det() const noexcept { return m00 * m11 - m01 * m10; }
  double frobenius() const noexcept;
  Vec2 operator*(Vec2 v) const noexcept { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
};

using Point2 = Vec2;

struct Eigen2 {
  double lambda1 = 0.0;  // largest
  double lambda2 = 0.0;
  Vec2 v1;               // unit, sign arbitrary
  Vec2 v2;               // unit, v1 rotated +90 degrees
};

struct KltFeatures {
  Vec2 mean;
  Mat2 cov;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  /// Rows are the oriented principal eigenvector and its +90 degree rotation.
  Mat2 basis;
  /// Angle of the oriented principal eigenvector from the +x axis, (-180, 180].
  double theta_deg = 0.0;
  /// 1 - lambda2 / lambda1; 0 when lambda1 == 0.
  double eccentricity = 0.0;

  Vec2 v1() const noexcept { return {basis.m00, basis.m01}; }
  Vec2 v2() const noexcept { return {basis.m10, basis.m11}; }
};

/// Set pixels as (x = col, y = height - 1 - row). Throws TooFewPoints with
/// fewer than two set pixels.
std::vector<Point2> edge_points(const BinaryMask& m);

Vec2 mean_vector(std::span<const Point2> pts);

/// Population (1/N) covariance.
Mat2 covariance(std::span<const Point2> pts);

/// Closed-form symmetric 2x2 eigendecomposition. Isotropic input yields
/// v1 = (1, 0). Throws NotSymmetric when |m01 - m10| is not negligible.
Eigen2 eigen2x2(const Mat2& c);

/// Picks the sign of v1 that points toward the heavy tail of the projected
/// distribution (positive third central moment). A vanishing third moment
/// falls back to the direction with angle in (-90, 90].
Vec2 orient_sign(std::span<const Point2> pts, Vec2 v1_raw);

/// Angle of v from the +x axis in degrees, in (-180, 180].
double angle_deg(Vec2 v) noexcept;

KltFeatures klt_features(std::span<const Point2> pts);

/// A * (p - M) for every point.
std::vector<Vec2> transform(std::span<const Point2> pts, const KltFeatures& f);

}  // namespace klg
