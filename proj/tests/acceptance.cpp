// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "klg/classify.hpp"
#include "klg/edges.hpp"
#include "klg/evaluate.hpp"
#include "klg/klg.h"
#include "klg/klt.hpp"
#include "klg/pipeline.hpp"
#include "klg/raster.hpp"
#include "klg/segment.hpp"
#include "klg/synth.hpp"
#include "oracles/reference_blobs.hpp"
#include "oracles/reference_canny.hpp"
#include "test_util.hpp"

using namespace klg;

namespace {

// Time budgets, seconds.
constexpr double kMidpointBudget = 1e-3;
constexpr double kOrientationBudget = 1.0;
constexpr double kLawsBudget = 5.0;
constexpr double kCannyBudget = 10.0;
constexpr double kSyntheticBudget = 30.0;

// Numerical tolerances.
constexpr double kOrientationTolDeg = 0.5;
constexpr double kEigenResidualRel = 1e-12;
constexpr double kIdentityRel = 1e-9;
constexpr double kTransformTol = 1e-9;

// Synthetic accuracy targets.
constexpr double kNoiselessAccuracy = 1.0;
constexpr double kNoisyAccuracy = 0.96;
constexpr double kNoisySigmaDeg = 2.0;
constexpr std::uint64_t kSyntheticSeed = 2024;
constexpr std::size_t kPerClass = 10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const GestureTable& table() {
  static const GestureTable t = GestureTable::standard();
  return t;
}

Outcome midpoint_reproduction() {
  const auto t0 = Clock::now();
  std::size_t hits = 0;
  for (const auto& row : table().rows()) {
    const auto c = classify_angle(row.midpoint(), table());
    if (c.label == row.label) ++hits;
  }
  const double dt = seconds_since(t0);
  return {hits == table().rows().size() && dt < kMidpointBudget,
          fmt("%zu/%zu midpoints, %.3f ms", hits, table().rows().size(), dt * 1e3)};
}

Outcome classifier_agreement() {
  const auto templates = midpoint_templates(table(), 1.0);
  std::size_t agree = 0;
  for (const auto& row : table().rows()) {
    const double m = row.midpoint();
    const auto a = classify_angle(m, table());
    const auto n = classify_nn(m, 1.0, templates, NnWeights{1.0, 0.0});
    if (a.label && a.label == n.label) ++agree;
  }
  return {agree == table().rows().size(), fmt("%zu/%zu agree", agree, table().rows().size())};
}

// Points (u, +w) and (u, -w): the u axis is exactly principal, and the
// exponential quantiles give a long tail toward +u.
std::vector<Point2> skewed_cloud(double angle_deg) {
  const double c = std::cos(angle_deg * std::numbers::pi / 180.0);
  const double s = std::sin(angle_deg * std::numbers::pi / 180.0);
  constexpr int kHalf = 200;
  std::vector<Point2> pts;
  for (int i = 0; i < kHalf; ++i) {
    const double u = -12.0 * std::log(1.0 - (i + 0.5) / kHalf) + 30.0;
    const double w = 2.0 * std::sin(0.37 * i);
    for (double sw : {w, -w}) pts.push_back({c * u - s * sw + 5.0, s * u + c * sw - 3.0});
  }
  return pts;
}

Outcome orientation_recovery() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int n = 0;
  for (int a = -170; a <= 180; a += 10, ++n) {
    const auto f = klt_features(skewed_cloud(a));
    worst = std::max(worst, std::abs(angular_difference(f.theta_deg, a)));
  }
  const double dt = seconds_since(t0);
  return {n == 36 && worst <= kOrientationTolDeg && dt < kOrientationBudget,
          fmt("%d clouds, max error %.2e deg, %.3f s", n, worst, dt)};
}

Outcome numerical_laws() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> count(3, 500);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  double residual = 0.0, trace = 0.0, det = 0.0, offdiag = 0.0, centre = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = count(rng);
    const double sx = std::exp(3.0 * u(rng));
    const double sy = std::exp(3.0 * u(rng));
    const double phi = std::numbers::pi * u(rng);
    const double ox = 200.0 * u(rng);
    const double oy = 200.0 * u(rng);
    std::vector<Point2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
      const double a = sx * g(rng);
      const double b = sy * g(rng);
      p = {ox + std::cos(phi) * a - std::sin(phi) * b, oy + std::sin(phi) * a + std::cos(phi) * b};
    }
    const Mat2 c = covariance(pts);
    const Eigen2 e = eigen2x2(c);
    const double norm = c.frobenius();
    for (const auto& [lam, v] : {std::pair{e.lambda1, e.v1}, std::pair{e.lambda2, e.v2}}) {
      const Vec2 cv = c * v;
      residual = std::max(residual, std::hypot(cv.x - lam * v.x, cv.y - lam * v.y) / (1.0 + norm));
    }
    trace = std::max(trace, std::abs(c.trace() - (e.lambda1 + e.lambda2)) / std::abs(c.trace()));
    det = std::max(det, std::abs(c.det() - e.lambda1 * e.lambda2) / std::abs(c.det()));

    const auto f = klt_features(pts);
    const auto out = transform(pts, f);
    const Vec2 m = mean_vector(out);
    const Mat2 tc = covariance(out);
    centre = std::max(centre, std::hypot(m.x, m.y));
    offdiag = std::max(offdiag, std::max(std::abs(tc.m01), std::abs(tc.m10)) / (1.0 + f.lambda1));
  }
  const double dt = seconds_since(t0);
  const bool ok = residual <= kEigenResidualRel && trace <= kIdentityRel && det <= kIdentityRel &&
                  offdiag <= kTransformTol && centre <= kTransformTol && dt < kLawsBudget;
  return {ok, fmt("residual %.1e, trace %.1e, det %.1e, offdiag %.1e, mean %.1e, %.2f s", residual, trace, det,
                  offdiag, centre, dt)};
}

Outcome canny_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  const CannyParams p;
  int same = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto mask = test::random_mask(rng, 16, 16, density(rng));
    const GrayImage img = mask_to_gray(mask);
    const auto got = canny(img, p);
    oracle::Grid grid = oracle::make_grid(16, 16);
    for (std::size_t i = 0; i < img.size(); ++i) grid.v[i] = img[i];
    bool degenerate = false;
    const auto ref = oracle::canny(grid, p.sigma, p.kernel_size, p.tl_frac, p.th_frac, kTieTolerance, &degenerate);
    if (degenerate == got.degenerate && std::equal(ref.begin(), ref.end(), got.edges.pixels().begin())) ++same;
  }
  const double dt = seconds_since(t0);
  return {same == 100 && dt < kCannyBudget, fmt("%d/100 bit-identical, %.3f s", same, dt)};
}

Outcome hysteresis_monotonicity() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> dim(4, 24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GrayImage field(static_cast<std::size_t>(dim(rng)), static_cast<std::size_t>(dim(rng)));
    for (auto& v : field.pixels()) v = u(rng) < 0.4 ? 0.0 : 100.0 * u(rng);
    const double tl = 60.0 * u(rng);
    const double th = tl + 40.0 * u(rng) + 1e-6;
    const double tl2 = tl + 20.0 * u(rng);
    const double th2 = std::max(th + 20.0 * u(rng), tl2 + 1e-6);
    const auto base = hysteresis(field, tl, th);
    for (const auto& raised : {hysteresis(field, tl2, th), hysteresis(field, tl, th2), hysteresis(field, tl2, th2)})
      for (std::size_t i = 0; i < base.size(); ++i)
        if (raised[i] && !base[i]) ++violations;
  }
  return {violations == 0, fmt("%d pixels added by raising thresholds", violations)};
}

Outcome segmentation_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 40);
  std::uniform_real_distribution<double> density(0.0, 0.6);
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = static_cast<std::size_t>(dim(rng));
    const auto h = static_cast<std::size_t>(dim(rng));
    const auto mask = test::random_mask(rng, w, h, density(rng));
    const auto blobs = oracle::flood_fill_blobs({mask.pixels().begin(), mask.pixels().end()}, w, h);
    const oracle::Blob* big = oracle::largest(blobs);
    try {
      const auto blob = biggest_blob(mask, 1);
      const auto rect = crop_to_content(blob).rect;
      if (big != nullptr && count_true(blob) == big->area &&
          rect == CropRect{big->row_min, big->row_max, big->col_min, big->col_max})
        ++agree;
    } catch (const Error& e) {
      if (big == nullptr && e.code() == Errc::NoSkinDetected) ++agree;
    }
  }
  return {agree == 100, fmt("%d/100 match flood fill", agree)};
}

// Writes the ten-class set and returns the pipeline accuracy. truth_accuracy
// receives the accuracy of the angle classifier fed the generator's own
// angles, the ceiling for any orientation estimate.
double synthetic_accuracy(const std::string& dir, double sigma, double* truth_accuracy = nullptr) {
  std::size_t truth_hits = 0;
  std::size_t n = 0;
  for (const auto& row : table().rows()) {
    const auto samples = generate_synthetic(table(), row.label, kPerClass, sigma, kSyntheticSeed);
    for (const auto& s : samples) {
      ++n;
      if (classify_angle(s.theta_deg, table()).label == row.label) ++truth_hits;
    }
    write_synthetic(samples, dir);
  }
  if (truth_accuracy != nullptr) *truth_accuracy = static_cast<double>(truth_hits) / static_cast<double>(n);
  return evaluate(dir, dir + "/labels.csv", Pipeline{Config{}}).overall_accuracy();
}

Outcome synthetic_accuracy_noiseless(const test::TempDir& dir, double& elapsed) {
  const auto t0 = Clock::now();
  const double acc = synthetic_accuracy(dir.str(), 0.0);
  elapsed += seconds_since(t0);
  return {acc >= kNoiselessAccuracy, fmt("sigma 0: accuracy %.2f%%", 100.0 * acc)};
}

Outcome synthetic_accuracy_noisy(const test::TempDir& dir, double& elapsed) {
  const auto t0 = Clock::now();
  double truth = 0.0;
  const double acc = synthetic_accuracy(dir.str(), kNoisySigmaDeg, &truth);
  elapsed += seconds_since(t0);
  return {acc >= kNoisyAccuracy && elapsed < kSyntheticBudget,
          fmt("sigma %.0f: accuracy %.2f%% (target %.0f%%, true angles alone %.2f%%), %.2f s for both sets",
              kNoisySigmaDeg, 100.0 * acc, 100.0 * kNoisyAccuracy, 100.0 * truth, elapsed)};
}

Outcome pnm_round_trip() {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> dim(1, 32);
  std::uniform_int_distribution<int> byte(0, 255);
  int exact = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = static_cast<std::size_t>(dim(rng));
    const auto h = static_cast<std::size_t>(dim(rng));
    RgbImage rgb(w, h);
    GrayImage gray(w, h);
    for (std::size_t i = 0; i < rgb.size(); ++i) {
      rgb[i] = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
                static_cast<std::uint8_t>(byte(rng))};
      gray[i] = byte(rng);
    }
    bool ok = true;
    for (auto enc : {PnmEncoding::Ascii, PnmEncoding::Binary}) {
      ok = ok && std::get<RgbImage>(load_pnm(save_pnm(rgb, enc))) == rgb;
      ok = ok && std::get<GrayImage>(load_pnm(save_pnm(gray, enc))) == gray;
    }
    if (ok) ++exact;
  }
  return {exact == 50, fmt("%d/50 images identical in P2, P3, P5 and P6", exact)};
}

Outcome batch_determinism(const test::TempDir& dir) {
  klg_config* cfg = nullptr;
  if (klg_config_create(&cfg) != KLG_OK) return {false, klg_last_error()};
  std::string reports[2];
  for (auto& text : reports) {
    klg_report* rep = nullptr;
    if (klg_evaluate(cfg, dir.str().c_str(), (dir.str() + "/labels.csv").c_str(), &rep) != KLG_OK) {
      klg_config_destroy(cfg);
      return {false, klg_last_error()};
    }
    text = klg_report_json(rep);
    klg_report_destroy(rep);
  }
  klg_config_destroy(cfg);
  return {reports[0] == reports[1] && !reports[0].empty(),
          fmt("%zu-byte reports %s", reports[0].size(), reports[0] == reports[1] ? "identical" : "differ")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* name, const Outcome& o) {
    std::printf("%s %-4s %-32s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report("1", "midpoint reproduction", guarded(midpoint_reproduction));
  report("2", "classifier agreement", guarded(classifier_agreement));
  report("3", "orientation recovery", guarded(orientation_recovery));
  report("4", "eigen numerical laws", guarded(numerical_laws));
  report("5", "canny oracle equivalence", guarded(canny_equivalence));
  report("6", "hysteresis monotonicity", guarded(hysteresis_monotonicity));
  report("7", "segmentation oracle", guarded(segmentation_oracle));

  test::TempDir clean, noisy;
  double elapsed = 0.0;
  report("8a", "synthetic accuracy, noiseless", guarded([&] { return synthetic_accuracy_noiseless(clean, elapsed); }));
  report("8b", "synthetic accuracy, noisy", guarded([&] { return synthetic_accuracy_noisy(noisy, elapsed); }));
  report("9", "pnm round trip", guarded(pnm_round_trip));
  report("10", "batch determinism", guarded([&] { return batch_determinism(noisy); }));

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
