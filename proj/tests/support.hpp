#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "voidinspect/edge_detect.hpp"
#include "voidinspect/raster.hpp"

namespace vi_test {

using namespace voidinspect;

inline GrayImage uniform(int w, int h, std::uint8_t v) { return GrayImage(w, h, v); }

inline void draw_disk(GrayImage& img, double cx, double cy, double r, std::uint8_t v) {
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.at(x, y) = v;
}

inline void add_noise(GrayImage& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(std::clamp(std::lround(v + n(rng)), 0L, 255L));
}

/// Classic integer midpoint circle; every pixel has exactly two 8-neighbours
/// on the circle for r >= 2.
inline std::vector<Point> midpoint_circle(Point c, int r) {
  std::set<Point> pts;
  int x = r, y = 0, err = 1 - r;
  while (x >= y) {
    for (const auto& [dx, dy] : {std::pair{x, y}, {y, x}, {-y, x}, {-x, y}, {-x, -y}, {-y, -x}, {y, -x}, {x, -y}})
      pts.insert({c.x + dx, c.y + dy});
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
  return {pts.begin(), pts.end()};
}

inline EdgeMask edges_from(int w, int h, const std::vector<Point>& pts) {
  EdgeMask e;
  e.edges = mask_from_pixels(w, h, pts);
  e.sign = SignMap(w, h);
  return e;
}

template <typename R>
R rotate90(const R& in) {
  // (x, y) -> (h-1-y, x): a quarter turn with y pointing down.
  R out(in.height(), in.width());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) out.at(in.height() - 1 - y, x) = in.at(x, y);
  return out;
}

inline Point rotate90(Point p, int height) { return {height - 1 - p.y, p.x}; }

inline bool eight_connected(const std::vector<Point>& pixels) {
  if (pixels.empty()) return true;
  const std::set<Point> all(pixels.begin(), pixels.end());
  std::set<Point> seen{pixels.front()};
  std::vector<Point> stack{pixels.front()};
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Point q{p.x + dx, p.y + dy};
        if (all.count(q) && seen.insert(q).second) stack.push_back(q);
      }
  }
  return seen.size() == all.size();
}

}  // namespace vi_test
