#include "voidinspect/ball_segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace voidinspect {

void SegmentationParams::validate() const {
  if (slice_height <= 0 || slice_width <= 0) throw Error("segmentation: slice dimensions must be positive");
  if (threshold_window < 3 || threshold_window % 2 == 0)
    throw Error("segmentation: threshold_window must be odd and >= 3");
  if (radius_bin_width < 1) throw Error("segmentation: radius_bin_width must be >= 1");
  if (!(gap_factor > 1.0)) throw Error("segmentation: gap_factor must be > 1");
  if (row_tolerance && !(*row_tolerance > 0)) throw Error("segmentation: row_tolerance must be positive");
  if (min_radius < 3 || max_radius < min_radius)
    throw Error("segmentation: radius range must satisfy 3 <= min_radius <= max_radius");
}

BinaryMask threshold_by_slices(const GrayImage& img, const SegmentationParams& p) {
  p.validate();
  const int w = img.width();
  const int h = img.height();
  BinaryMask mask(w, h);
  const int half = p.threshold_window / 2;

  for (int sy = 0; sy < h; sy += p.slice_height) {
    for (int sx = 0; sx < w; sx += p.slice_width) {
      const int sw = std::min(p.slice_width, w - sx);
      const int sh = std::min(p.slice_height, h - sy);
      // Integral image of the slice, (sw+1) x (sh+1).
      std::vector<long long> integral(static_cast<std::size_t>(sw + 1) * (sh + 1), 0);
      auto I = [&](int x, int y) -> long long& { return integral[static_cast<std::size_t>(y) * (sw + 1) + x]; };
      for (int y = 0; y < sh; ++y) {
        long long row = 0;
        for (int x = 0; x < sw; ++x) {
          row += img.at(sx + x, sy + y);
          I(x + 1, y + 1) = I(x + 1, y) + row;
        }
      }
      for (int y = 0; y < sh; ++y) {
        const int y0 = std::max(0, y - half);
        const int y1 = std::min(sh, y + half + 1);
        for (int x = 0; x < sw; ++x) {
          const int x0 = std::max(0, x - half);
          const int x1 = std::min(sw, x + half + 1);
          const long long sum = I(x1, y1) - I(x0, y1) - I(x1, y0) + I(x0, y0);
          const long long count = static_cast<long long>(x1 - x0) * (y1 - y0);
          // v < sum/count - offset, kept in integers.
          const long long v = img.at(sx + x, sy + y);
          mask.at(sx + x, sy + y) = (v + p.threshold_offset) * count < sum ? 1 : 0;
        }
      }
    }
  }
  return mask;
}

namespace {

// Offsets voting for radius r: the annulus (r-1)^2 < d^2 <= r^2, which holds
// every 4-boundary pixel of the digital disk d <= r.
std::vector<Point> vote_offsets(int r) {
  std::vector<Point> out;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 > (r - 1) * (r - 1) && d2 <= r * r) out.push_back({dx, dy});
    }
  return out;
}

bool is_boundary(const BinaryMask& mask, int x, int y) {
  if (!mask.at(x, y)) return false;
  static constexpr Point k4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const Point& d : k4) {
    const int nx = x + d.x;
    const int ny = y + d.y;
    if (mask.contains(nx, ny) && !mask.at(nx, ny)) return true;
  }
  return false;
}

// Votes an ideal disk of radius r casts for its own centre.
int full_circle_votes(int r) {
  const int side = 2 * r + 3;
  BinaryMask disk(side, side);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) disk.at(x, y) = in_disk(x - r - 1, y - r - 1, r) ? 1 : 0;
  int n = 0;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) n += is_boundary(disk, x, y) ? 1 : 0;
  return n;
}

struct Candidate {
  double score;
  int votes;
  int r;
  int x;
  int y;
};

constexpr double kAcceptFraction = 0.6;

}  // namespace

std::vector<BallRegion> detect_circles(const BinaryMask& mask, RadiusRange range) {
  if (range.min < 3 || range.max < range.min) throw Error("detect_circles: radius range must satisfy 3 <= min <= max");
  const int w = mask.width();
  const int h = mask.height();

  std::vector<Point> boundary;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (is_boundary(mask, x, y)) boundary.push_back({x, y});
  if (boundary.empty()) return {};

  const int nr = range.max - range.min + 1;
  std::vector<int> theoretical(nr);
  for (int i = 0; i < nr; ++i) theoretical[i] = full_circle_votes(range.min + i);

  // Planes for r-1, r, r+1 are kept so each radius can be checked against its
  // neighbours without holding the full 3D accumulator.
  auto accumulate = [&](int r) {
    std::vector<int> acc(static_cast<std::size_t>(w) * h, 0);
    for (const Point& o : vote_offsets(r))
      for (const Point& b : boundary) {
        const int cx = b.x + o.x;
        const int cy = b.y + o.y;
        if (cx >= 0 && cy >= 0 && cx < w && cy < h) ++acc[static_cast<std::size_t>(cy) * w + cx];
      }
    return acc;
  };
  auto score_at = [&](const std::vector<int>& acc, int i, int x, int y) {
    return static_cast<double>(acc[static_cast<std::size_t>(y) * w + x]) / theoretical[i];
  };

  std::vector<Candidate> candidates;
  std::vector<int> prev;
  std::vector<int> cur = accumulate(range.min);
  for (int i = 0; i < nr; ++i) {
    std::vector<int> next = i + 1 < nr ? accumulate(range.min + i + 1) : std::vector<int>{};
    const int min_votes = static_cast<int>(std::ceil(kAcceptFraction * theoretical[i]));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int votes = cur[static_cast<std::size_t>(y) * w + x];
        if (votes < min_votes) continue;
        const double s = score_at(cur, i, x, y);
        bool is_max = true;
        for (int di = -1; di <= 1 && is_max; ++di) {
          const std::vector<int>* plane = di < 0 ? &prev : (di == 0 ? &cur : &next);
          if (plane->empty()) continue;
          for (int dy = -1; dy <= 1 && is_max; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              if (di == 0 && dx == 0 && dy == 0) continue;
              const int nx = x + dx;
              const int ny = y + dy;
              if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
              if (score_at(*plane, i + di, nx, ny) > s) {
                is_max = false;
                break;
              }
            }
        }
        if (is_max) candidates.push_back({s, votes, range.min + i, x, y});
      }
    }
    prev = std::move(cur);
    cur = std::move(next);
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.r < b.r;
  });

  std::vector<BallRegion> out;
  const double min_sep2 = static_cast<double>(range.min) * range.min;
  for (const Candidate& c : candidates) {
    const bool suppressed = std::any_of(out.begin(), out.end(), [&](const BallRegion& b) {
      const double dx = b.center.x - c.x;
      const double dy = b.center.y - c.y;
      return dx * dx + dy * dy < min_sep2;
    });
    if (!suppressed) out.push_back({{static_cast<double>(c.x), static_cast<double>(c.y)}, static_cast<double>(c.r),
                                    Provenance::detected});
  }
  return out;
}

int quantize_radius(double radius, int bin_width) {
  if (bin_width < 1) throw Error("quantize_radius: bin width must be >= 1");
  return static_cast<int>(std::lround(radius / bin_width)) * bin_width;
}

RadiusFilterResult filter_by_radius_mode(std::span<const BallRegion> balls, int bin_width) {
  if (balls.empty()) throw Error("filter_by_radius_mode: no balls to filter");
  RadiusFilterResult result;
  result.histogram.bin_width = bin_width;
  for (const BallRegion& b : balls) ++result.histogram.counts[quantize_radius(b.radius, bin_width)];

  int best_count = -1;
  for (const auto& [bin, count] : result.histogram.counts) {
    // Ascending bin order, so >= hands ties to the larger radius.
    if (count >= best_count) {
      best_count = count;
      result.histogram.mode_radius = bin;
    }
  }
  for (const BallRegion& b : balls)
    if (quantize_radius(b.radius, bin_width) == result.histogram.mode_radius) result.kept.push_back(b);
  return result;
}

namespace {

double median_radius(const std::vector<BallRegion>& balls) {
  std::vector<double> r;
  r.reserve(balls.size());
  for (const auto& b : balls) r.push_back(b.radius);
  std::sort(r.begin(), r.end());
  const std::size_t n = r.size();
  return n % 2 ? r[n / 2] : 0.5 * (r[n / 2 - 1] + r[n / 2]);
}

// Indices into `balls`, grouped into rows (ascending y) and sorted by x.
std::vector<std::vector<std::size_t>> group_rows(const std::vector<BallRegion>& balls, double tolerance) {
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return balls[a].center.y < balls[b].center.y; });

  std::vector<std::vector<std::size_t>> rows;
  double row_mean = 0.0;
  for (std::size_t idx : order) {
    const double y = balls[idx].center.y;
    if (rows.empty() || std::abs(y - row_mean) > tolerance) {
      rows.push_back({idx});
      row_mean = y;
    } else {
      auto& row = rows.back();
      row_mean = (row_mean * static_cast<double>(row.size()) + y) / static_cast<double>(row.size() + 1);
      row.push_back(idx);
    }
  }
  for (auto& row : rows)
    std::stable_sort(row.begin(), row.end(),
                     [&](std::size_t a, std::size_t b) { return balls[a].center.x < balls[b].center.x; });
  return rows;
}

double distance(const BallRegion& a, const BallRegion& b) {
  return std::hypot(a.center.x - b.center.x, a.center.y - b.center.y);
}

}  // namespace

InterpolationResult interpolate_missing(std::vector<BallRegion> balls, const SegmentationParams& p) {
  InterpolationResult result;
  if (balls.size() < 2) {
    result.balls = std::move(balls);
    result.too_few_balls = true;
    return result;
  }
  const double tolerance = p.row_tolerance.value_or(median_radius(balls) / 2.0);
  const auto rows = group_rows(balls, tolerance);

  double d_ref = std::numeric_limits<double>::infinity();
  for (const auto& row : rows)
    for (std::size_t i = 1; i < row.size(); ++i) d_ref = std::min(d_ref, distance(balls[row[i - 1]], balls[row[i]]));

  std::vector<BallRegion> added;
  if (std::isfinite(d_ref) && d_ref > 0) {
    for (const auto& row : rows) {
      for (std::size_t i = 1; i < row.size(); ++i) {
        const BallRegion& a = balls[row[i - 1]];
        const BallRegion& b = balls[row[i]];
        const double gap = distance(a, b);
        if (gap <= p.gap_factor * d_ref) continue;
        const int missing = static_cast<int>(std::lround(gap / d_ref)) - 1;
        for (int k = 1; k <= missing; ++k) {
          const double t = static_cast<double>(k) / (missing + 1);
          added.push_back({{a.center.x + t * (b.center.x - a.center.x), a.center.y + t * (b.center.y - a.center.y)},
                           a.radius + t * (b.radius - a.radius),
                           Provenance::interpolated});
        }
      }
    }
  }
  result.balls = std::move(balls);
  result.balls.insert(result.balls.end(), added.begin(), added.end());
  return result;
}

void sort_row_major(std::vector<BallRegion>& balls, double row_tolerance) {
  const auto rows = group_rows(balls, row_tolerance);
  std::vector<BallRegion> sorted;
  sorted.reserve(balls.size());
  for (const auto& row : rows)
    for (std::size_t idx : row) sorted.push_back(balls[idx]);
  balls = std::move(sorted);
}

std::vector<BallRegion> segment_balls(const GrayImage& img, const SegmentationParams& p) {
  p.validate();
  const BinaryMask mask = threshold_by_slices(img, p);
  std::vector<BallRegion> circles = detect_circles(mask, {p.min_radius, p.max_radius});
  if (circles.empty()) throw Error("no balls detected");
  RadiusFilterResult filtered = filter_by_radius_mode(circles, p.radius_bin_width);
  std::vector<BallRegion> balls = interpolate_missing(std::move(filtered.kept), p).balls;
  sort_row_major(balls, p.row_tolerance.value_or(median_radius(balls) / 2.0));
  return balls;
}

}  // namespace voidinspect
