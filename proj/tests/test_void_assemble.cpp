#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "support.hpp"
#include "voidinspect/synth_bench.hpp"
#include "voidinspect/void_assemble.hpp"

using namespace voidinspect;

namespace {

const Point kC{20, 20};

// Span on ring r covering the ring positions whose angle lies in [a0, a1) degrees.
Void1D arc(int r, double a0, double a1, double mean) {
  const RingSample ring = ring_pixels(kC, r, 41, 41);
  Void1D v;
  v.r = r;
  v.mean_intensity = v.span_max = v.span_min = mean;
  bool started = false;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    double a = std::atan2(double(ring.coords[i].y - kC.y), double(ring.coords[i].x - kC.x)) * 180 / M_PI;
    if (a < 0) a += 360;
    if (a >= a0 && a < a1) {
      if (!started) v.beta_start = i;
      started = true;
      v.pixels.push_back(ring.coords[i]);
      v.beta_end = ring.wrap(static_cast<std::ptrdiff_t>(i) + 1);
    }
  }
  return v;
}

BinaryMask square(int w, int h, Box b) {
  BinaryMask m(w, h);
  for (int y = b.y0; y <= b.y1; ++y)
    for (int x = b.x0; x <= b.x1; ++x) m.at(x, y) = 1;
  return m;
}

SynthSpec one_ball(std::uint64_t seed, std::vector<VoidDisk> voids, double sigma, int contrast = 7) {
  SynthSpec s;
  s.seed = seed;
  s.noise_sigma = sigma;
  s.void_contrast = contrast;
  s.voids = {std::move(voids)};
  return s;
}

const BallRegion kBall{{25, 25}, 19, Provenance::detected};

InspectionReport run(const SynthImage& s, const InspectParams& p = {}) {
  return inspect_ball(crop_ball(s.image, kBall), kBall, p);
}

}  // namespace

TEST(Assemble, OverlappingSpansJoin) {
  RingSpans spans;
  spans[10] = {arc(10, 20, 60, 110)};
  spans[9] = {arc(9, 25, 55, 112)};
  const auto voids = assemble_2d(spans, {});
  ASSERT_EQ(voids.size(), 1u);
  EXPECT_EQ(voids[0].spans.size(), 2u);
  const double n10 = spans[10][0].pixels.size(), n9 = spans[9][0].pixels.size();
  EXPECT_DOUBLE_EQ(voids[0].mean_intensity, (110 * n10 + 112 * n9) / (n10 + n9));
}

TEST(Assemble, DisjointSpansStaySeparate) {
  RingSpans spans;
  for (int r = 12; r >= 6; --r) spans[r] = {arc(r, 10, 50, 110), arc(r, 190, 230, 111)};
  EXPECT_EQ(assemble_2d(spans, {}).size(), 2u);
}

TEST(Assemble, SingleSpan) {
  RingSpans spans;
  spans[7] = {arc(7, 0, 90, 105)};
  const auto voids = assemble_2d(spans, {});
  ASSERT_EQ(voids.size(), 1u);
  EXPECT_EQ(voids[0].pixels, spans[7][0].pixels);
}

TEST(Assemble, IntensityMismatchStartsNewVoid) {
  RingSpans spans;
  spans[10] = {arc(10, 20, 60, 110)};
  spans[9] = {arc(9, 25, 55, 120)};
  EXPECT_EQ(assemble_2d(spans, {}).size(), 2u);
}

TEST(Assemble, SkippedRingTerminates) {
  RingSpans spans;
  spans[10] = {arc(10, 20, 60, 110)};
  spans[8] = {arc(8, 20, 60, 110)};
  EXPECT_EQ(assemble_2d(spans, {}).size(), 2u);
}

TEST(Assemble, BridgingSpanMergesVoids) {
  RingSpans spans;
  spans[10] = {arc(10, 10, 40, 110), arc(10, 60, 90, 110)};
  spans[9] = {arc(9, 5, 95, 110)};
  const auto voids = assemble_2d(spans, {});
  ASSERT_EQ(voids.size(), 1u);
  EXPECT_EQ(voids[0].spans.size(), 3u);
}

TEST(AssembleProperty, SpansArePartitioned) {
  std::mt19937 rng(1);
  for (int t = 0; t < 30; ++t) {
    RingSpans spans;
    std::size_t total = 0;
    for (int r = 14; r >= 2; --r) {
      if (rng() % 3 == 0) continue;
      const double a = rng() % 180;
      spans[r] = {arc(r, a, a + 20 + rng() % 40, 100 + rng() % 12)};
      if (rng() % 2) spans[r].push_back(arc(r, a + 100, a + 150, 100 + rng() % 12));
      total += spans[r].size();
    }
    const auto voids = assemble_2d(spans, {});
    std::size_t seen = 0;
    std::set<Point> pixels;
    for (const Void2D& v : voids) {
      seen += v.spans.size();
      std::vector<Point> from_spans;
      for (const Void1D& s : v.spans) from_spans.insert(from_spans.end(), s.pixels.begin(), s.pixels.end());
      std::vector<Point> a = from_spans, b = v.pixels;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      EXPECT_EQ(a, b);
      double weighted = 0;
      for (const Void1D& s : v.spans) weighted += s.mean_intensity * s.pixels.size();
      EXPECT_NEAR(v.mean_intensity, weighted / v.pixels.size(), 1e-9);
      for (const Point& p : v.pixels) EXPECT_TRUE(pixels.insert(p).second);
    }
    EXPECT_EQ(seen, total);
  }
}

TEST(AssembleProperty, ToleranceMonotone) {
  std::mt19937 rng(2);
  for (int t = 0; t < 30; ++t) {
    RingSpans spans;
    for (int r = 14; r >= 2; --r) {
      const double a = rng() % 90;
      spans[r] = {arc(r, a, a + 60, 100 + rng() % 20), arc(r, a + 120, a + 200, 100 + rng() % 20)};
    }
    std::size_t last = SIZE_MAX;
    for (double tol : {0.0, 1.0, 3.0, 6.0, 10.0, 20.0, 100.0}) {
      AssemblyParams p;
      p.intensity_tol = tol;
      const std::size_t n = assemble_2d(spans, p).size();
      EXPECT_LE(n, last) << "tol " << tol;
      last = n;
    }
  }
}

TEST(Finalize, AreaBoundary) {
  const auto eight = finalize_voids({}, square(10, 10, {1, 1, 4, 2}), {});
  EXPECT_TRUE(eight.empty());
  BinaryMask nine = square(10, 10, {1, 1, 3, 3});
  const auto kept = finalize_voids({}, nine, {});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].area, 9);
  EXPECT_EQ(kept[0].label, 1);
}

TEST(Finalize, EmptyMask) { EXPECT_TRUE(finalize_voids({}, BinaryMask(5, 5), {}).empty()); }

TEST(Finalize, LabelsByDecreasingArea) {
  BinaryMask m = square(30, 30, {0, 0, 3, 3});
  for (const Point& p : set_pixels(square(30, 30, {10, 10, 17, 17}))) m.at(p) = 1;
  Void2D v;
  for (int y = 22; y <= 26; ++y)
    for (int x = 22; x <= 26; ++x) v.pixels.push_back({x, y});
  const auto regions = finalize_voids(std::vector<Void2D>{v}, m, {});
  ASSERT_EQ(regions.size(), 3u);
  EXPECT_EQ(regions[0].area, 64);
  EXPECT_EQ(regions[1].area, 25);
  EXPECT_EQ(regions[2].area, 16);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(regions[i].label, i + 1);
  EXPECT_EQ(regions[0].bbox, (Box{10, 10, 17, 17}));
  EXPECT_DOUBLE_EQ(regions[0].centroid.x, 13.5);
}

TEST(Finalize, DiagonalTouchIsOneRegion) {
  BinaryMask m = square(20, 20, {0, 0, 2, 2});
  for (const Point& p : set_pixels(square(20, 20, {3, 3, 5, 5}))) m.at(p) = 1;
  EXPECT_EQ(finalize_voids({}, m, {}).size(), 1u);
}

TEST(FinalizeProperty, IdempotentAndConnected) {
  std::mt19937 rng(6);
  for (int t = 0; t < 30; ++t) {
    BinaryMask m(30, 30);
    for (auto& v : m.data()) v = rng() % 100 < 35;
    const auto regions = finalize_voids({}, m, {});
    BinaryMask again(30, 30);
    std::set<Point> seen;
    for (const VoidRegion& r : regions) {
      EXPECT_GE(r.area, 9);
      EXPECT_EQ(r.area, static_cast<int>(r.pixels.size()));
      EXPECT_TRUE(vi_test::eight_connected(r.pixels));
      for (const Point& p : r.pixels) {
        EXPECT_TRUE(seen.insert(p).second);
        again.at(p) = 1;
      }
    }
    const auto second = finalize_voids({}, again, {});
    ASSERT_EQ(second.size(), regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
      EXPECT_EQ(second[i].pixels, regions[i].pixels);
      EXPECT_EQ(second[i].label, regions[i].label);
    }
  }
}

TEST(Measure, Formula) {
  EXPECT_EQ(void_percentage(100, 400), 25.0);
  EXPECT_EQ(round_percentage(void_percentage(78, 1257)), 6.21);
  EXPECT_THROW(void_percentage(1, 0), Error);
}

TEST(Measure, Report) {
  const BallRegion ball{{20, 20}, 20, Provenance::detected};
  const InspectionReport none = measure({}, ball);
  EXPECT_EQ(none.ball_area, 1257);
  EXPECT_EQ(none.void_percentage, 0.0);
  VoidRegion r;
  r.area = 78;
  const InspectionReport one = measure({r}, ball);
  EXPECT_EQ(one.total_void_area, 78);
  EXPECT_EQ(round_percentage(one.void_percentage), 6.21);
}

TEST(Inspect, UniformBall) {
  const SynthImage s = generate(one_ball(0, {}, 0.0));
  const InspectionReport r = run(s);
  EXPECT_EQ(r.void_percentage, 0.0);
  EXPECT_TRUE(r.regions.empty());
}

TEST(Inspect, SingleVoidPercentage) {
  const SynthImage s = generate(one_ball(0, {{6, -4, 5}}, 0.0, 10));
  EXPECT_EQ(s.truth.balls[0].void_area, 81);
  const InspectionReport r = run(s);
  EXPECT_NEAR(r.void_percentage, s.truth.balls[0].void_percentage, 1.5);
  EXPECT_EQ(r.regions.size(), 1u);
}

TEST(Inspect, TwoVoids) {
  const SynthImage s = generate(one_ball(0, {{-8, 0, 4}, {7, 5, 5}}, 0.0, 10));
  EXPECT_EQ(run(s).regions.size(), 2u);
}

TEST(Inspect, RegionsInImageCoordinates) {
  const SynthImage s = generate(one_ball(0, {{6, -4, 5}}, 0.0, 10));
  const InspectionReport r = run(s);
  ASSERT_EQ(r.regions.size(), 1u);
  EXPECT_NEAR(r.regions[0].centroid.x, 25 + 6, 1.0);
  EXPECT_NEAR(r.regions[0].centroid.y, 25 - 4, 1.0);
}

TEST(InspectProperty, ReportInvariants) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SynthImage s =
        generate(one_ball(seed, {{-5.0 + seed % 11, 6.0 - seed % 13, 4.0 + seed % 4}, {3, 3, 2}}, 1.0 + (seed % 3) * 0.5));
    const InspectionReport r = run(s);
    int total = 0;
    std::set<Point> seen;
    for (const VoidRegion& reg : r.regions) {
      total += reg.area;
      EXPECT_GE(reg.area, 9);
      EXPECT_TRUE(vi_test::eight_connected(reg.pixels));
      for (const Point& p : reg.pixels) {
        EXPECT_TRUE(seen.insert(p).second);
        EXPECT_LE(std::hypot(p.x - 25.0, p.y - 25.0), 19.0);
      }
    }
    EXPECT_EQ(total, r.total_void_area);
    EXPECT_LE(r.total_void_area, r.ball_area);
    EXPECT_GE(r.void_percentage, 0.0);
    EXPECT_LE(r.void_percentage, 100.0);
  }
}

TEST(InspectProperty, Deterministic) {
  const SynthImage s = generate(one_ball(5, {{4, 4, 6}}, 1.0));
  const InspectionReport a = run(s), b = run(s);
  ASSERT_EQ(a.regions.size(), b.regions.size());
  for (std::size_t i = 0; i < a.regions.size(); ++i) EXPECT_EQ(a.regions[i].pixels, b.regions[i].pixels);
}

TEST(InspectParams, Validation) {
  InspectParams p;
  p.assembly.a_min = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.scan.max_span_fraction = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.rim_margin = -1;
  EXPECT_THROW(p.validate(), Error);
}
