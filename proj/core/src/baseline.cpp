#include "voidinspect/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace voidinspect {

void BaselineParams::validate() const {
  if (!(max_join_distance >= 0)) throw Error("baseline: max_join_distance must be >= 0");
}

std::vector<Point> chain_endpoints(const ContourSet& contours, int width, int height) {
  const BinaryMask open = mask_from_pixels(width, height, contours.open);
  std::vector<Point> out;
  for (const Point& p : contours.open) {
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Point q{p.x + dx, p.y + dy};
        if (open.contains(q) && open.at(q)) ++n;
      }
    if (n <= 1) out.push_back(p);
  }
  return out;
}

std::vector<std::pair<Point, Point>> pair_endpoints(std::vector<Point> endpoints, double max_distance) {
  std::vector<std::pair<Point, Point>> pairs;
  const double max2 = max_distance * max_distance;
  auto dist2 = [](Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
  };
  auto touching = [](Point a, Point b) { return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1; };

  std::vector<bool> used(endpoints.size(), false);
  bool progress = true;
  while (progress) {
    progress = false;
    // Nearest eligible partner of every unused endpoint; ties go to the lower index.
    std::vector<int> nearest(endpoints.size(), -1);
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
      if (used[i]) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < endpoints.size(); ++j) {
        if (j == i || used[j] || touching(endpoints[i], endpoints[j])) continue;
        const double d = dist2(endpoints[i], endpoints[j]);
        if (d <= max2 && d < best) {
          best = d;
          nearest[i] = static_cast<int>(j);
        }
      }
    }
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
      const int j = nearest[i];
      if (j < 0 || used[i] || used[j] || static_cast<std::size_t>(j) < i) continue;
      if (nearest[j] != static_cast<int>(i)) continue;
      used[i] = used[j] = true;
      pairs.emplace_back(endpoints[i], endpoints[j]);
      progress = true;
    }
  }
  return pairs;
}

std::vector<Point> line_pixels(Point a, Point b) {
  std::vector<Point> out;
  int dx = std::abs(b.x - a.x);
  int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Point p = a;
  while (true) {
    out.push_back(p);
    if (p == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return out;
}

EdgeMask bridge_open_contours(const EdgeMask& edges, double max_distance) {
  EdgeMask out = edges;
  if (max_distance <= 0) return out;
  const ContourSet contours = classify_contours(edges);
  const auto pairs = pair_endpoints(chain_endpoints(contours, edges.width(), edges.height()), max_distance);
  for (const auto& [a, b] : pairs)
    for (const Point& p : line_pixels(a, b))
      if (out.edges.contains(p)) out.edges.at(p) = 1;
  return out;
}

InspectionReport baseline_detect(const BallCrop& crop, const EdgeMask& edges, const BallRegion& ball,
                                 const BaselineParams& p, int a_min) {
  p.validate();
  const EdgeMask joined = bridge_open_contours(edges, p.max_join_distance);
  const ContourSet contours = classify_contours(joined);
  const BinaryMask fill = fill_closed(contours, joined.width(), joined.height());
  AssemblyParams assembly;
  assembly.a_min = a_min;
  return report_from_voids({}, fill, crop, ball, assembly);
}

InspectionReport baseline_inspect_ball(const BallCrop& crop, const BallRegion& ball, const InspectParams& inspect,
                                       const BaselineParams& p) {
  inspect.validate();
  const PreparedBall prepared = prepare_ball(crop, inspect);
  const EdgeMask edges = ball_edges(prepared, inspect.edges);
  return baseline_detect(crop, edges, ball, p, inspect.assembly.a_min);
}

}  // namespace voidinspect
