// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cli/commands.hpp"
#include "cli/report.hpp"
#include "voidinspect/baseline.hpp"
#include "voidinspect/image_io.hpp"
#include "voidinspect/pipeline.hpp"
#include "voidinspect/synth_bench.hpp"

using namespace voidinspect;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kPctTolerance = 0.0;              // 1
constexpr int kLowContrastBalls = 50;              // 3
constexpr double kMinMeanIou = 0.55;               // 3
constexpr double kMaxAreaError = 2.5;              // 3
constexpr double kMinAreaErrorShare = 0.80;        // 3
constexpr int kVoidFreeBalls = 100;                // 4
constexpr int kMinZeroBalls = 95;                  // 4
constexpr int kOrderingImages = 50;                // 5
constexpr int kBrokenContourBalls = 20;            // 5
constexpr double kGapDegrees = 30.0;               // 5
constexpr int kGridSeeds = 20;                     // 6
constexpr double kMaxInterpolatedOffset = 2.0;     // 6

const BallRegion kBall{{25, 25}, 19, Provenance::detected};

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Void disk of radius 4..7, centre uniform over every position that keeps
// the disk inside the ball.
VoidDisk random_void(std::mt19937_64& rng, int ball_radius) {
  std::uniform_int_distribution<int> radius(4, 7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double r = radius(rng);
  const double lim = ball_radius - r;
  double dx, dy;
  do {
    dx = unit(rng) * lim;
    dy = unit(rng) * lim;
  } while (std::hypot(dx, dy) > lim);
  return {dx, dy, r};
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome criterion1() {
  const double pct = void_percentage(100, 400);
  const double rounded = round_percentage(pct);
  cli::CsvRow row{"x.png", 0, Provenance::detected, pct, 1, Method::proposed};
  const bool csv_ok = cli::summary_csv({row}).find(",25.00,") != std::string::npos;
  const bool ok = std::abs(pct - 25.0) <= kPctTolerance && rounded == 25.0 && csv_ok;
  return {ok, fmt("measure(100, 400) = %.17g", pct)};
}

// Random 8-connected polyomino of exactly n pixels.
std::vector<Point> random_shape(std::mt19937_64& rng, int n) {
  std::vector<Point> shape{{10, 10}};
  std::set<Point> in{{10, 10}};
  while (static_cast<int>(shape.size()) < n) {
    const Point p = shape[rng() % shape.size()];
    const Point q{p.x + static_cast<int>(rng() % 3) - 1, p.y + static_cast<int>(rng() % 3) - 1};
    if (in.insert(q).second) shape.push_back(q);
  }
  return shape;
}

Outcome criterion2() {
  std::mt19937_64 rng(2);
  int dropped8 = 0, kept9 = 0;
  constexpr int kShapes = 500;
  for (int i = 0; i < kShapes; ++i) {
    const auto eight = finalize_voids({}, mask_from_pixels(21, 21, random_shape(rng, 8)), {});
    dropped8 += eight.empty();
    const auto nine = finalize_voids({}, mask_from_pixels(21, 21, random_shape(rng, 9)), {});
    kept9 += nine.size() == 1 && nine[0].area == 9;
  }
  return {dropped8 == kShapes && kept9 == kShapes,
          fmt("8-px dropped %g/%g, 9-px kept %g/500", dropped8, kShapes, kept9)};
}

ScoreCard score_image(const SynthImage& s, const ImageInspection& res) {
  const InspectionReport* r = match_report(res.reports, s.truth.balls[0]);
  return r ? score(*r, s.truth.balls[0]) : score_pixels({}, s.truth.balls[0], 0, 0.0);
}

ImageInspection inspect_or_empty(const GrayImage& img, Method m) {
  try {
    return inspect_image(img, {}, {}, {}, m);
  } catch (const Error&) {
    return {};
  }
}

Outcome criterion3() {
  std::mt19937_64 rng(3003);
  std::vector<ScoreCard> cards;
  int within = 0;
  for (int i = 0; i < kLowContrastBalls; ++i) {
    SynthSpec spec;
    spec.seed = 30000 + i;
    spec.voids = {{random_void(rng, spec.ball_radius)}};
    const SynthImage s = generate(spec);
    const ScoreCard c = score_image(s, inspect_or_empty(s.image, Method::proposed));
    within += c.area_pct_error <= kMaxAreaError;
    cards.push_back(c);
  }
  const MeanScores m = mean_scores(cards);
  const double iou = m.iou.value_or(0.0);
  const double share = static_cast<double>(within) / kLowContrastBalls;
  return {iou >= kMinMeanIou && share >= kMinAreaErrorShare,
          fmt("mean IoU %.3f, area error <= 2.5 on %.0f%% of balls", iou, 100 * share)};
}

Outcome criterion4() {
  int zero = 0;
  for (int i = 0; i < kVoidFreeBalls; ++i) {
    SynthSpec spec;
    spec.seed = 40000 + i;
    const ImageInspection res = inspect_or_empty(generate(spec).image, Method::proposed);
    zero += res.reports.size() == 1 && round_percentage(res.reports[0].void_percentage) == 0.0;
  }
  return {zero >= kMinZeroBalls, fmt("%g/%g void-free balls at 0.00%%", zero, kVoidFreeBalls)};
}

// Deletes edge pixels in two opposite angular sectors around the void centre.
void cut_gaps(EdgeMask& e, PointF c, double phase) {
  const double half = kGapDegrees * M_PI / 360.0;
  for (int y = 0; y < e.height(); ++y)
    for (int x = 0; x < e.width(); ++x)
      for (int k = 0; k < 2; ++k) {
        const double a = std::remainder(std::atan2(y - c.y, x - c.x) - phase - k * M_PI, 2 * M_PI);
        if (std::abs(a) <= half) e.edges.at(x, y) = 0;
      }
}

Outcome criterion5() {
  std::mt19937_64 rng(5005);
  std::vector<Comparison> suite;
  for (int i = 0; i < kOrderingImages; ++i) {
    SynthSpec spec;
    spec.grid_rows = 2;
    spec.grid_cols = 2;
    spec.noise_sigma = 1.5;
    spec.seed = 50000 + i;
    for (int b = 0; b < 4; ++b) spec.voids.push_back({random_void(rng, spec.ball_radius)});
    const SynthImage s = generate(spec);
    const ImageInspection p = inspect_or_empty(s.image, Method::proposed);
    const ImageInspection b = inspect_or_empty(s.image, Method::baseline);
    suite.push_back(compare(s.truth, p.reports, b.reports));
  }
  const Comparison all = combine(suite);

  std::vector<Comparison> broken;
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
  const InspectParams ip;
  for (int i = 0; i < kBrokenContourBalls; ++i) {
    SynthSpec spec;
    spec.noise_sigma = 1.5;
    spec.seed = 55000 + i;
    const VoidDisk v = random_void(rng, spec.ball_radius);
    spec.voids = {{v}};
    const SynthImage s = generate(spec);
    const BallCrop crop = crop_ball(s.image, kBall);
    const PreparedBall prep = prepare_ball(crop, ip);
    EdgeMask edges = ball_edges(prep, ip.edges);
    cut_gaps(edges, {prep.center.x + v.dx, prep.center.y + v.dy}, angle(rng));
    const std::vector<InspectionReport> p{proposed_detect(crop, prep, edges, kBall, ip)};
    const std::vector<InspectionReport> b{baseline_detect(crop, edges, kBall, {}, ip.assembly.a_min)};
    broken.push_back(compare(s.truth, p, b));
  }
  const Comparison sub = combine(broken);
  const double pr = all.proposed_recall.value_or(0), br = all.baseline_recall.value_or(0);
  const double spr = sub.proposed_recall.value_or(0), sbr = sub.baseline_recall.value_or(0);
  std::string detail = fmt("suite recall proposed %.3f vs baseline %.3f; ", pr, br) +
                       fmt("broken-contour subsuite %.3f vs %.3f", spr, sbr);
  return {!all.no_voids && all.ordering_holds && !sub.no_voids && sub.strict, detail};
}

Outcome criterion6() {
  int good = 0;
  double worst = 0;
  for (int seed = 0; seed < kGridSeeds; ++seed) {
    std::mt19937_64 rng(6000 + seed);
    SynthSpec spec;
    spec.grid_rows = 4;
    spec.grid_cols = 4;
    spec.seed = 60000 + seed;
    // Interpolation runs along rows, so the erased ball needs a neighbour on each side.
    const GridIndex gone{static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 2)};
    spec.erased_balls = {gone};
    std::vector<BallRegion> balls;
    try {
      balls = segment_balls(generate(spec).image, {});
    } catch (const Error&) {
      continue;
    }
    const auto interp = std::count_if(balls.begin(), balls.end(), [](auto& b) { return b.provenance == Provenance::interpolated; });
    if (balls.size() != 16 || interp != 1) continue;
    const auto it = std::find_if(balls.begin(), balls.end(), [](auto& b) { return b.provenance == Provenance::interpolated; });
    const PointF t = spec.ball_center(gone);
    const double d = std::hypot(it->center.x - t.x, it->center.y - t.y);
    worst = std::max(worst, d);
    good += d <= kMaxInterpolatedOffset;
  }
  return {good == kGridSeeds, fmt("%g/%g seeds recovered, worst centre offset %.3f px", good, kGridSeeds, worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome criterion7() {
  const fs::path root = fs::temp_directory_path() / "voidinspect_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  std::mt19937_64 rng(7007);
  std::vector<fs::path> images;
  for (int i = 0; i < 3; ++i) {
    SynthSpec spec;
    spec.grid_rows = 3;
    spec.grid_cols = 4;
    spec.seed = 70000 + i;
    spec.erased_balls = {{1, 1 + i % 2}};
    for (int b = 0; b < 12; ++b) spec.voids.push_back(b % 3 ? std::vector<VoidDisk>{random_void(rng, 19)} : std::vector<VoidDisk>{});
    const fs::path p = root / ("img" + std::to_string(i) + ".png");
    save_png(p, generate(spec).image);
    images.push_back(p);
  }
  std::ostringstream out, err;
  auto run = [&](int jobs, const std::string& dir) {
    cli::Invocation inv;
    inv.inputs = images;
    inv.config.methods = {Method::proposed, Method::baseline};
    inv.config.jobs = jobs;
    inv.config.out = root / dir;
    return cli::cmd_inspect(inv, out, err);
  };
  const int codes = run(1, "a") + run(1, "b") + run(8, "c");
  int identical = 0, total = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    if (entry.path().extension() != ".json") continue;
    const std::string name = entry.path().filename().string();
    const std::string a = slurp(entry.path());
    ++total;
    identical += !a.empty() && a == slurp(root / "b" / name) && a == slurp(root / "c" / name);
  }
  return {codes == 0 && total == 6 && identical == total,
          fmt("%g/%g JSON reports identical across two runs and --jobs 1 vs 8", identical, total)};
}

// Invariants re-checked on fresh synthetic data.
Outcome criterion8() {
  std::vector<std::string> failures;
  auto check = [&](bool ok, const char* what) {
    if (!ok && std::find(failures.begin(), failures.end(), what) == failures.end()) failures.emplace_back(what);
  };

  for (const Point c : {Point{19, 19}, Point{4, 30}}) {
    std::set<Point> seen;
    for (int r = 0; r <= 18; ++r)
      for (const Point& p : ring_pixels(c, r, 39, 39).coords) {
        check(seen.insert(p).second, "ring disjointness");
        check(ring_index(p.x - c.x, p.y - c.y) == r, "ring radius");
      }
    std::size_t expect = 0;
    for (int y = 0; y < 39; ++y)
      for (int x = 0; x < 39; ++x) expect += ring_index(x - c.x, y - c.y) <= 18;
    check(seen.size() == expect, "ring coverage");
  }

  std::mt19937_64 rng(8008);
  const InspectParams ip;
  for (int i = 0; i < 25; ++i) {
    SynthSpec spec;
    spec.seed = 80000 + i;
    spec.noise_sigma = i % 2 ? 1.5 : 1.0;
    spec.voids = {{random_void(rng, 19), random_void(rng, 19)}};
    const SynthImage s = generate(spec);
    const BallCrop crop = crop_ball(s.image, kBall);
    const PreparedBall prep = prepare_ball(crop, ip);
    const EdgeMask edges = ball_edges(prep, ip.edges);
    const RingSpans spans = detect_1d_voids(prep.image, edges, prep.center, prep.r_max, ip.scan);
    std::size_t n_spans = 0;
    for (const auto& [r, list] : spans) {
      std::set<Point> ring_seen;
      for (const Void1D& v : list) {
        ++n_spans;
        check(v.mean_intensity - v.background >= ip.scan.thr_1d, "span-background margin");
        for (const Point& p : v.pixels) check(ring_seen.insert(p).second, "spans disjoint per ring");
      }
    }
    const auto voids = assemble_2d(spans, ip.assembly);
    std::size_t member = 0;
    for (const Void2D& v : voids) member += v.spans.size();
    check(member == n_spans, "partition of spans into voids");

    std::size_t last = SIZE_MAX;
    for (double tol : {0.0, 2.0, 6.0, 12.0, 50.0}) {
      AssemblyParams ap;
      ap.intensity_tol = tol;
      const std::size_t n = assemble_2d(spans, ap).size();
      check(n <= last, "tolerance monotonicity");
      last = n;
    }

    const InspectionReport rep = proposed_detect(crop, prep, edges, kBall, ip);
    std::set<Point> used;
    for (const VoidRegion& reg : rep.regions) {
      check(reg.area >= ip.assembly.a_min, "region area >= A_min");
      const BinaryMask m = mask_from_pixels(50, 50, reg.pixels);
      check(max_label(label_components(m, Connectivity::eight)) == 1, "region 8-connectivity");
      for (const Point& p : reg.pixels) check(used.insert(p).second, "regions disjoint");
    }

    // Quarter turn of the crop turns the 1D void pixel set with it.
    GrayImage turned(crop.image.height(), crop.image.width());
    for (int y = 0; y < crop.image.height(); ++y)
      for (int x = 0; x < crop.image.width(); ++x) turned.at(crop.image.height() - 1 - y, x) = crop.image.at(x, y);
    const BallCrop tcrop{turned, {0, 0}, {crop.image.height() - 1 - crop.center.y, crop.center.x}, crop.radius};
    const PreparedBall tprep = prepare_ball(tcrop, ip);
    std::set<Point> a, b;
    for (const auto& [r, list] : spans)
      for (const Void1D& v : list)
        for (const Point& p : v.pixels) a.insert({crop.image.height() - 1 - p.y, p.x});
    for (const auto& [r, list] : detect_1d_voids(tprep.image, ball_edges(tprep, ip.edges), tprep.center, tprep.r_max, ip.scan))
      for (const Void1D& v : list) b.insert(v.pixels.begin(), v.pixels.end());
    check(a == b, "rotation equivariance");
  }
  std::string detail = "ring disjointness/coverage, span margin, region connectivity and area, span partition, "
                       "tolerance monotonicity, rotation equivariance";
  if (!failures.empty()) {
    detail = "violated:";
    for (const auto& f : failures) detail += " [" + f + "]";
  }
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"percentage formula exact", criterion1},
      {"A_min boundary", criterion2},
      {"low-contrast regime", criterion3},
      {"false positives", criterion4},
      {"recall ordering", criterion5},
      {"grid recovery", criterion6},
      {"determinism", criterion7},
      {"invariant suite", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
