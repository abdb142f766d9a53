#include "voidinspect/edge_detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <span>

namespace voidinspect {

namespace {

// Responses this close to zero carry no reliable sign.
constexpr double kZeroResponse = 1e-9;

constexpr Point kFour[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
constexpr Point kEight[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};

}  // namespace

void EdgeParams::validate() const {
  if (!(sigma > 0)) throw Error("edges: sigma must be positive");
  if (!(min_slope >= 0)) throw Error("edges: min_slope must be non-negative");
}

RealImage log_kernel(double sigma) {
  if (!(sigma > 0)) throw Error("log_kernel: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int side = 2 * radius + 1;
  RealImage k(side, side);
  const double s2 = sigma * sigma;
  double sum = 0.0;
  for (int y = -radius; y <= radius; ++y)
    for (int x = -radius; x <= radius; ++x) {
      const double r2 = x * x + y * y;
      const double v = (r2 - 2.0 * s2) / (s2 * s2) * std::exp(-r2 / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
      k.at(x + radius, y + radius) = s2 * v;
      sum += s2 * v;
    }
  const double mean = sum / static_cast<double>(k.size());
  for (auto& v : k.data()) v -= mean;
  return k;
}

LogResponse log_response(const GrayImage& crop, double sigma) {
  const RealImage k = log_kernel(sigma);
  const int radius = k.width() / 2;
  if (crop.width() < k.width() || crop.height() < k.height())
    throw Error("log_response: crop " + std::to_string(crop.width()) + "x" + std::to_string(crop.height()) +
                " is smaller than the " + std::to_string(k.width()) + "px kernel");
  const int w = crop.width();
  const int h = crop.height();
  LogResponse out{RealImage(w, h), sigma};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int ky = -radius; ky <= radius; ++ky) {
        const int sy = std::clamp(y - ky, 0, h - 1);
        for (int kx = -radius; kx <= radius; ++kx) {
          const int sx = std::clamp(x - kx, 0, w - 1);
          acc += k.at(kx + radius, ky + radius) * crop.at(sx, sy);
        }
      }
      out.values.at(x, y) = acc;
    }
  return out;
}

EdgeMask edge_mask(const LogResponse& resp, double min_slope) {
  const RealImage& v = resp.values;
  const int w = v.width();
  const int h = v.height();
  EdgeMask out{BinaryMask(w, h), SignMap(w, h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double a = v.at(x, y);
      out.sign.at(x, y) = a > kZeroResponse ? 1 : (a < -kZeroResponse ? -1 : 0);
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int s = out.sign.at(x, y);
      if (s == 0) continue;
      for (const Point& d : kFour) {
        const int nx = x + d.x;
        const int ny = y + d.y;
        if (!v.contains(nx, ny) || out.sign.at(nx, ny) != -s) continue;
        if (std::abs(v.at(x, y) - v.at(nx, ny)) >= min_slope) {
          out.edges.at(x, y) = 1;
          break;
        }
      }
    }
  return out;
}

namespace {

int loop_degree(const BinaryMask& in_loop, Point p) {
  int n = 0;
  for (const Point& d : kEight) {
    const Point q{p.x + d.x, p.y + d.y};
    if (in_loop.contains(q) && in_loop.at(q)) ++n;
  }
  return n;
}

// Orders a candidate loop as a cycle. Empty result if the pixel set is not a
// simple 8-connected cycle of length >= 4.
std::vector<Point> trace_cycle(const std::vector<Point>& pixels, const BinaryMask& in_loop) {
  if (pixels.size() < 4) return {};
  for (const Point& p : pixels)
    if (loop_degree(in_loop, p) != 2) return {};

  std::vector<Point> order{pixels.front()};
  Point prev{-1, -1};
  Point cur = pixels.front();
  std::set<Point> seen{cur};
  while (true) {
    Point next{-1, -1};
    for (const Point& d : kEight) {
      const Point q{cur.x + d.x, cur.y + d.y};
      if (!in_loop.contains(q) || !in_loop.at(q) || q == prev) continue;
      next = q;
      break;
    }
    if (next == pixels.front()) break;
    if (seen.contains(next)) return {};
    seen.insert(next);
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  if (order.size() != pixels.size()) return {};
  return order;
}

}  // namespace

ContourSet classify_contours(const EdgeMask& edges) {
  const int w = edges.width();
  const int h = edges.height();
  const BinaryMask& e = edges.edges;

  // Holes: 4-connected non-edge components that never touch the border.
  BinaryMask non_edge(w, h);
  for (std::size_t i = 0; i < e.size(); ++i) non_edge.data()[i] = e.data()[i] ? 0 : 1;
  const LabelMap comps = label_components(non_edge, Connectivity::four);
  const int n = max_label(comps);
  std::vector<bool> touches_border(n + 1, false);
  for (int x = 0; x < w; ++x) {
    touches_border[comps.at(x, 0)] = true;
    touches_border[comps.at(x, h - 1)] = true;
  }
  for (int y = 0; y < h; ++y) {
    touches_border[comps.at(0, y)] = true;
    touches_border[comps.at(w - 1, y)] = true;
  }

  // First pixel of each hole in raster order; the pixel above it lies on the
  // hole's outer boundary.
  std::vector<Point> first(n + 1, Point{-1, -1});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int lab = comps.at(x, y);
      if (lab != 0 && first[lab].x < 0) first[lab] = {x, y};
    }

  ContourSet out;
  BinaryMask on_loop(w, h);
  BinaryMask in_loop(w, h);
  for (int lab = 1; lab <= n; ++lab) {
    if (touches_border[lab]) continue;
    auto adjacent_to_hole = [&](Point p) {
      for (const Point& d : kFour) {
        const Point q{p.x + d.x, p.y + d.y};
        if (comps.contains(q) && comps.at(q) == lab) return true;
      }
      return false;
    };

    // Outer boundary: edge pixels 4-adjacent to the hole, 8-connected to the
    // seed above the hole's first pixel.
    std::vector<Point> pixels;
    const Point seed{first[lab].x, first[lab].y - 1};
    std::vector<Point> stack{seed};
    in_loop.at(seed) = 1;
    while (!stack.empty()) {
      const Point p = stack.back();
      stack.pop_back();
      pixels.push_back(p);
      for (const Point& d : kEight) {
        const Point q{p.x + d.x, p.y + d.y};
        if (!e.contains(q) || !e.at(q) || in_loop.at(q) || !adjacent_to_hole(q)) continue;
        in_loop.at(q) = 1;
        stack.push_back(q);
      }
    }
    std::sort(pixels.begin(), pixels.end(), [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });

    // Drop redundant corner pixels whose removal keeps the hole sealed: a pixel
    // may go only if all its 4-neighbours are loop or hole pixels.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = pixels.begin(); it != pixels.end(); ++it) {
        const Point p = *it;
        if (loop_degree(in_loop, p) <= 2) continue;
        bool sealed = true;
        for (const Point& d : kFour) {
          const Point q{p.x + d.x, p.y + d.y};
          if (!in_loop.contains(q) || (!in_loop.at(q) && comps.at(q) != lab)) {
            sealed = false;
            break;
          }
        }
        if (!sealed) continue;
        in_loop.at(p) = 0;
        pixels.erase(it);
        changed = true;
        break;
      }
    }

    std::vector<Point> cycle = trace_cycle(pixels, in_loop);
    for (const Point& p : pixels) in_loop.at(p) = 0;
    if (cycle.empty()) continue;
    for (const Point& p : cycle) on_loop.at(p) = 1;
    out.closed.push_back(std::move(cycle));
  }

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (e.at(x, y) && !on_loop.at(x, y)) out.open.push_back({x, y});
  return out;
}

BinaryMask loop_interior(std::span<const Point> loop, int width, int height) {
  BinaryMask blocked(width, height);
  for (const Point& p : loop)
    if (blocked.contains(p)) blocked.at(p) = 1;

  BinaryMask outside(width, height);
  std::vector<Point> stack;
  auto seed = [&](int x, int y) {
    if (!blocked.at(x, y) && !outside.at(x, y)) {
      outside.at(x, y) = 1;
      stack.push_back({x, y});
    }
  };
  for (int x = 0; x < width; ++x) {
    seed(x, 0);
    seed(x, height - 1);
  }
  for (int y = 0; y < height; ++y) {
    seed(0, y);
    seed(width - 1, y);
  }
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (const Point& d : kFour) {
      const int nx = p.x + d.x;
      const int ny = p.y + d.y;
      if (blocked.contains(nx, ny)) seed(nx, ny);
    }
  }

  BinaryMask interior(width, height);
  for (std::size_t i = 0; i < interior.size(); ++i)
    interior.data()[i] = (!blocked.data()[i] && !outside.data()[i]) ? 1 : 0;
  return interior;
}

BinaryMask fill_closed(const ContourSet& contours, int width, int height) {
  Raster<int, struct ParityTag> parity(width, height, 0);
  for (const auto& loop : contours.closed) {
    const BinaryMask inside = loop_interior(loop, width, height);
    for (std::size_t i = 0; i < inside.size(); ++i) parity.data()[i] += inside.data()[i];
  }
  BinaryMask out(width, height);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = parity.data()[i] % 2;
  for (const auto& loop : contours.closed)
    for (const Point& p : loop)
      if (out.contains(p)) out.at(p) = 1;
  return out;
}

}  // namespace voidinspect
