#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "klg/klt.hpp"
#include "oracles/reference_moments.hpp"
#include "test_util.hpp"

using namespace klg;

namespace {

std::vector<std::pair<double, double>> pairs(const std::vector<Point2>& pts) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : pts) out.emplace_back(p.x, p.y);
  return out;
}

std::vector<Point2> rotated(const std::vector<Point2>& pts, double deg) {
  const double c = std::cos(deg * std::numbers::pi / 180.0);
  const double s = std::sin(deg * std::numbers::pi / 180.0);
  std::vector<Point2> out;
  for (const auto& p : pts) out.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
  return out;
}

// Long tail toward +x, slight spread in y.
std::vector<Point2> skewed_cloud() {
  std::vector<Point2> pts;
  for (int i = 0; i < 40; ++i) {
    const double x = 0.02 * i * i;
    pts.push_back({x, 1.0});
    pts.push_back({x, -1.0});
  }
  return pts;
}

Errc error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::Io;
}

}  // namespace

TEST(EdgePoints, FlipsRows) {
  BinaryMask m(3, 3);
  m.at(0, 2) = 1;
  m.at(2, 0) = 1;
  const auto pts = edge_points(m);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], (Point2{2, 2}));
  EXPECT_EQ(pts[1], (Point2{0, 0}));
}

TEST(EdgePoints, FullSquare) {
  const auto pts = edge_points(BinaryMask(2, 2, 1));
  ASSERT_EQ(pts.size(), 4u);
  std::vector<std::pair<double, double>> got = pairs(pts);
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::pair<double, double>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(EdgePoints, TooFew) {
  EXPECT_EQ(error_of([] { edge_points(BinaryMask(3, 3)); }), Errc::TooFewPoints);
  BinaryMask one(3, 3);
  one.at(1, 1) = 1;
  EXPECT_EQ(error_of([&] { edge_points(one); }), Errc::TooFewPoints);
}

TEST(Mean, Examples) {
  const std::vector<Point2> sq{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  EXPECT_EQ(mean_vector(sq), (Vec2{1, 1}));
  const std::vector<Point2> single{{3.5, -2}};
  EXPECT_EQ(mean_vector(single), (Vec2{3.5, -2}));
  const std::vector<Point2> diag{{0, 0}, {1, 1}, {2, 2}};
  EXPECT_EQ(mean_vector(diag), (Vec2{1, 1}));
}

TEST(Covariance, SquareIsIdentity) {
  const std::vector<Point2> sq{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  const auto c = covariance(sq);
  EXPECT_DOUBLE_EQ(c.m00, 1.0);
  EXPECT_DOUBLE_EQ(c.m01, 0.0);
  EXPECT_DOUBLE_EQ(c.m10, 0.0);
  EXPECT_DOUBLE_EQ(c.m11, 1.0);
}

TEST(Covariance, DiagonalLineMatchesOracle) {
  const std::vector<Point2> diag{{0, 0}, {1, 1}, {2, 2}};
  const auto c = covariance(diag);
  const auto ref = oracle::moments(pairs(diag));
  EXPECT_NEAR(c.m00, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.m01, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.m11, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.m00, ref.cxx, 1e-15);
  EXPECT_NEAR(c.m01, ref.cxy, 1e-15);
}

TEST(Covariance, TranslationInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int t = 0; t < 20; ++t) {
    std::vector<Point2> pts(25);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const Vec2 shift{u(rng), u(rng)};
    auto moved = pts;
    for (auto& p : moved) p = {p.x + shift.x, p.y + shift.y};
    const auto a = covariance(pts);
    const auto b = covariance(moved);
    EXPECT_NEAR(a.m00, b.m00, 1e-9);
    EXPECT_NEAR(a.m01, b.m01, 1e-9);
    EXPECT_NEAR(a.m11, b.m11, 1e-9);
  }
}

TEST(Eigen, IsotropicTie) {
  const auto e = eigen2x2({1, 0, 0, 1});
  EXPECT_EQ(e.lambda1, 1.0);
  EXPECT_EQ(e.lambda2, 1.0);
  EXPECT_EQ(e.v1, (Vec2{1, 0}));
}

TEST(Eigen, RankOne) {
  const double t = 2.0 / 3.0;
  const auto e = eigen2x2({t, t, t, t});
  EXPECT_NEAR(e.lambda1, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.lambda2, 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.v1.x), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(e.v1.x, e.v1.y, 1e-15);
}

TEST(Eigen, Diagonal) {
  const auto e = eigen2x2({2, 0, 0, 1});
  EXPECT_EQ(e.lambda1, 2.0);
  EXPECT_EQ(e.lambda2, 1.0);
  EXPECT_EQ(std::abs(e.v1.x), 1.0);
  const auto f = eigen2x2({1, 0, 0, 3});
  EXPECT_EQ(f.lambda1, 3.0);
  EXPECT_EQ(std::abs(f.v1.y), 1.0);
}

TEST(Eigen, AgreesWithJacobiOracle) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 200; ++t) {
    const double a = u(rng) + 10.0;
    const double d = u(rng) + 10.0;
    const double b = u(rng);
    const auto e = eigen2x2({a, b, b, d});
    const auto ref = oracle::jacobi(a, b, d);
    const double scale = 1.0 + std::abs(a) + std::abs(b) + std::abs(d);
    EXPECT_NEAR(e.lambda1, ref.big, 1e-12 * scale);
    EXPECT_NEAR(e.lambda2, ref.small, 1e-12 * scale);
    EXPECT_NEAR(std::abs(e.v1.x * ref.ux + e.v1.y * ref.uy), 1.0, 1e-9);
  }
}

TEST(Eigen, RejectsAsymmetric) {
  EXPECT_EQ(error_of([] { eigen2x2({1, 0.5, 0.2, 1}); }), Errc::NotSymmetric);
}

TEST(Orient, HeavyTailRight) {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {10, 0}};
  EXPECT_NEAR(oracle::projected_skew(pairs(pts), 1, 0), 269.28, 1e-9);
  EXPECT_EQ(orient_sign(pts, {1, 0}), (Vec2{1, 0}));
  EXPECT_EQ(orient_sign(pts, {-1, 0}), (Vec2{1, 0}));
  EXPECT_EQ(klt_features(pts).theta_deg, 0.0);
}

TEST(Orient, MirroredSet) {
  const std::vector<Point2> pts{{0, 0}, {7, 0}, {8, 0}, {9, 0}, {10, 0}};
  EXPECT_NEAR(oracle::projected_skew(pairs(pts), 1, 0), -269.28, 1e-9);
  EXPECT_EQ(orient_sign(pts, {1, 0}), (Vec2{-1, 0}));
  EXPECT_EQ(klt_features(pts).theta_deg, 180.0);
}

TEST(Orient, SymmetricFallsBackToRightHalfPlane) {
  const std::vector<Point2> pts{{0, 0}, {2, 0}};
  EXPECT_EQ(orient_sign(pts, {-1, 0}), (Vec2{1, 0}));
  const std::vector<Point2> vert{{0, 0}, {0, 2}};
  EXPECT_EQ(orient_sign(vert, {0, -1}), (Vec2{0, 1}));
}

TEST(AngleDeg, Range) {
  EXPECT_EQ(angle_deg({-1, 0}), 180.0);
  EXPECT_EQ(angle_deg({-1, -0.0}), 180.0);
  EXPECT_NEAR(angle_deg({0, -1}), -90.0, 1e-12);
}

TEST(Klt, SkewedDiagonalLine) {
  std::vector<Point2> pts;
  for (double t : {0.0, 1.0, 2.0, 3.0, 10.0}) pts.push_back({t, t});
  const auto f = klt_features(pts);
  EXPECT_NEAR(f.theta_deg, 45.0, 1e-9);
  EXPECT_NEAR(f.eccentricity, 1.0, 1e-12);
}

TEST(Klt, SquareIsIsotropic) {
  const std::vector<Point2> sq{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  const auto f = klt_features(sq);
  EXPECT_NEAR(f.lambda1, 1.0, 1e-15);
  EXPECT_NEAR(f.lambda2, 1.0, 1e-15);
  EXPECT_EQ(f.eccentricity, 0.0);
  EXPECT_EQ(f.theta_deg, 0.0);
}

TEST(Klt, CoincidentPointsFail) {
  const std::vector<Point2> same{{1, 1}, {1, 1}, {1, 1}};
  EXPECT_EQ(error_of([&] { klt_features(same); }), Errc::TooFewPoints);
}

TEST(Klt, BasisIsOrthonormalAndRotatedPlus90) {
  const auto f = klt_features(rotated(skewed_cloud(), 33.0));
  const Vec2 v1 = f.v1();
  const Vec2 v2 = f.v2();
  EXPECT_NEAR(v1.x * v1.x + v1.y * v1.y, 1.0, 1e-12);
  EXPECT_NEAR(v1.x * v2.x + v1.y * v2.y, 0.0, 1e-12);
  EXPECT_NEAR(v2.x, -v1.y, 1e-15);
  EXPECT_NEAR(v2.y, v1.x, 1e-15);
  EXPECT_NEAR(f.theta_deg, 33.0, 1e-9);
}

TEST(Klt, RotationEquivariance) {
  const auto base = klt_features(skewed_cloud());
  for (double phi = -175.0; phi <= 180.0; phi += 12.5) {
    const auto f = klt_features(rotated(skewed_cloud(), phi));
    double diff = f.theta_deg - base.theta_deg - phi;
    diff = std::remainder(diff, 360.0);
    EXPECT_NEAR(diff, 0.0, 1e-8) << phi;
  }
}

TEST(Klt, TranslationAndScale) {
  const auto pts = rotated(skewed_cloud(), -70.0);
  const auto f = klt_features(pts);
  auto moved = pts;
  for (auto& p : moved) p = {3.0 * p.x + 17.0, 3.0 * p.y - 4.0};
  const auto g = klt_features(moved);
  EXPECT_NEAR(g.theta_deg, f.theta_deg, 1e-9);
  EXPECT_NEAR(g.eccentricity, f.eccentricity, 1e-12);
  EXPECT_NEAR(g.lambda1, 9.0 * f.lambda1, 1e-9 * g.lambda1);
  EXPECT_NEAR(g.lambda2, 9.0 * f.lambda2, 1e-9 * g.lambda1);
  EXPECT_NEAR(g.mean.x, 3.0 * f.mean.x + 17.0, 1e-9);
}

TEST(Transform, CentresAndDiagonalizes) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Point2> pts(300);
  for (auto& p : pts) {
    const double a = 5.0 * n(rng);
    const double b = 1.5 * n(rng);
    p = {a + 0.3 * b + 40.0, 0.5 * a - b - 12.0};
  }
  const auto f = klt_features(pts);
  const auto out = transform(pts, f);
  ASSERT_EQ(out.size(), pts.size());
  const auto m = mean_vector(out);
  EXPECT_NEAR(m.x, 0.0, 1e-9);
  EXPECT_NEAR(m.y, 0.0, 1e-9);
  const auto c = covariance(out);
  EXPECT_NEAR(c.m00, f.lambda1, 1e-9 * (1 + f.lambda1));
  EXPECT_NEAR(c.m11, f.lambda2, 1e-9 * (1 + f.lambda1));
  EXPECT_NEAR(c.m01, 0.0, 1e-9 * (1 + f.lambda1));
}

TEST(Transform, CollinearSecondCoordinateVanishes) {
  std::vector<Point2> pts;
  for (double t : {0.0, 1.0, 2.0, 3.0, 10.0}) pts.push_back({t, t});
  const auto out = transform(pts, klt_features(pts));
  for (const auto& p : out) EXPECT_NEAR(p.y, 0.0, 1e-9);
}
