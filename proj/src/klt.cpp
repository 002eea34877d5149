#include <algorithm>
#include <cmath>
#include <numbers>

#include "klg/klt.hpp"

namespace klg {

double Mat2::frobenius() const noexcept {
  return std::sqrt(m00 * m00 + m01 * m01 + m10 * m10 + m11 * m11);
}

std::vector<Point2> edge_points(const BinaryMask& m) {
  std::vector<Point2> pts;
  const double top = static_cast<double>(m.height() - 1);
  for (std::size_t r = 0; r < m.height(); ++r) {
    for (std::size_t c = 0; c < m.width(); ++c) {
      if (m.at(r, c)) pts.push_back({static_cast<double>(c), top - static_cast<double>(r)});
    }
  }
  if (pts.size() < 2) {
    throw Error(Errc::TooFewPoints, std::to_string(pts.size()) + " edge pixel(s)");
  }
  return pts;
}

Vec2 mean_vector(std::span<const Point2> pts) {
  if (pts.empty()) throw Error(Errc::TooFewPoints, "empty point set");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(pts.size());
  return {sx / n, sy / n};
}

Mat2 covariance(std::span<const Point2> pts) {
  const Vec2 m = mean_vector(pts);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : pts) {
    const double dx = p.x - m.x;
    const double dy = p.y - m.y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const auto n = static_cast<double>(pts.size());
  return {sxx / n, sxy / n, sxy / n, syy / n};
}

Eigen2 eigen2x2(const Mat2& c) {
  const double norm = c.frobenius();
  if (std::abs(c.m01 - c.m10) > 1e-9 * (1.0 + norm)) {
    throw Error(Errc::NotSymmetric, "off-diagonal entries differ");
  }
  const double a = c.m00;
  const double b = 0.5 * (c.m01 + c.m10);
  const double d = c.m11;

  const double half_trace = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double r = std::hypot(half_diff, b);

  Eigen2 e;
  e.lambda1 = half_trace + r;
  e.lambda2 = half_trace - r;
  if (e.lambda1 - e.lambda2 <= 1e-12 * (1.0 + std::abs(e.lambda1))) {
    e.v1 = {1.0, 0.0};
  } else {
    // Pick the algebraically stable column of (C - lambda2 I).
    Vec2 v = half_diff >= 0.0 ? Vec2{half_diff + r, b} : Vec2{b, r - half_diff};
    const double len = std::hypot(v.x, v.y);
    e.v1 = {v.x / len, v.y / len};
  }
  e.v2 = {-e.v1.y, e.v1.x};
  return e;
}

Vec2 orient_sign(std::span<const Point2> pts, Vec2 v1_raw) {
  const Vec2 m = mean_vector(pts);
  double skew = 0.0;
  double scale = 0.0;
  for (const auto& p : pts) {
    const double proj = (p.x - m.x) * v1_raw.x + (p.y - m.y) * v1_raw.y;
    skew += proj * proj * proj;
    scale = std::max(scale, std::abs(proj));
  }
  const double eps = 1e-12 * static_cast<double>(pts.size()) * scale * scale * scale;
  if (skew > eps) return v1_raw;
  if (skew < -eps) return {-v1_raw.x, -v1_raw.y};
  const bool right_half = v1_raw.x > 0.0 || (v1_raw.x == 0.0 && v1_raw.y > 0.0);
  return right_half ? v1_raw : Vec2{-v1_raw.x, -v1_raw.y};
}

double angle_deg(Vec2 v) noexcept {
  double deg = std::atan2(v.y, v.x) * 180.0 / std::numbers::pi;
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

KltFeatures klt_features(std::span<const Point2> pts) {
  if (pts.size() < 2) throw Error(Errc::TooFewPoints, std::to_string(pts.size()) + " point(s)");
  const bool all_same = std::all_of(pts.begin(), pts.end(), [&](const Point2& p) { return p == pts.front(); });
  if (all_same) throw Error(Errc::TooFewPoints, "all points coincide");

  KltFeatures f;
  f.mean = mean_vector(pts);
  f.cov = covariance(pts);
  const Eigen2 e = eigen2x2(f.cov);
  f.lambda1 = std::max(e.lambda1, 0.0);
  f.lambda2 = std::max(e.lambda2, 0.0);

  const Vec2 v1 = orient_sign(pts, e.v1);
  f.basis = {v1.x, v1.y, -v1.y, v1.x};
  f.theta_deg = angle_deg(v1);
  f.eccentricity = f.lambda1 > 0.0 ? 1.0 - f.lambda2 / f.lambda1 : 0.0;
  return f;
}

std::vector<Vec2> transform(std::span<const Point2> pts, const KltFeatures& f) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(f.basis * Vec2{p.x - f.mean.x, p.y - f.mean.y});
  return out;
}

}  // namespace klg
