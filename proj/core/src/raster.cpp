#include "voidinspect/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace voidinspect {

std::size_t count_set(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.data().begin(), mask.data().end(), [](auto v) { return v != 0; }));
}

std::vector<Point> set_pixels(const BinaryMask& mask) {
  std::vector<Point> out;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) out.push_back({x, y});
  return out;
}

BinaryMask mask_from_pixels(int width, int height, std::span<const Point> pixels) {
  BinaryMask mask(width, height);
  for (const Point& p : pixels)
    if (mask.contains(p)) mask.at(p) = 1;
  return mask;
}

namespace {

class DisjointSets {
 public:
  int make() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins so the final numbering follows first appearance.
    if (a < b) parent_[b] = a; else parent_[a] = b;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<int> parent_;
};

}  // namespace

LabelMap label_components(const BinaryMask& mask, Connectivity connectivity) {
  const int w = mask.width();
  const int h = mask.height();
  LabelMap provisional(w, h, 0);
  DisjointSets sets;
  sets.make();  // slot 0 = background

  // Already-visited neighbours in raster order.
  static constexpr Point kPrev4[] = {{-1, 0}, {0, -1}};
  static constexpr Point kPrev8[] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  const std::span<const Point> prev =
      connectivity == Connectivity::four ? std::span<const Point>(kPrev4) : std::span<const Point>(kPrev8);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      int label = 0;
      for (const Point& d : prev) {
        const int nx = x + d.x;
        const int ny = y + d.y;
        if (!provisional.contains(nx, ny)) continue;
        const int other = provisional.at(nx, ny);
        if (other == 0) continue;
        if (label == 0) label = other; else sets.unite(label, other);
      }
      if (label == 0) label = sets.make();
      provisional.at(x, y) = label;
    }
  }

  std::vector<int> final_label(sets.size(), 0);
  int next = 0;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    const int root = sets.find(static_cast<int>(i));
    if (final_label[root] == 0) final_label[root] = ++next;
    final_label[i] = final_label[root];
  }
  for (auto& v : provisional.data()) v = final_label[v];
  return provisional;
}

int max_label(const LabelMap& labels) {
  int best = 0;
  for (auto v : labels.data()) best = std::max(best, v);
  return best;
}

int ring_index(int dx, int dy) {
  const long long d2 = 1LL * dx * dx + 1LL * dy * dy;
  long long r = std::llround(std::sqrt(static_cast<double>(d2)));
  // round(sqrt(d2)) == r  <=>  (2r-1)^2 <= 4*d2 < (2r+1)^2
  while (r > 0 && 4 * d2 < (2 * r - 1) * (2 * r - 1)) --r;
  while (4 * d2 >= (2 * r + 1) * (2 * r + 1)) ++r;
  return static_cast<int>(r);
}

RingSample ring_pixels(Point center, int radius, int width, int height) {
  RingSample ring;
  ring.radius = radius;
  ring.center = center;
  if (radius < 0) return ring;

  struct Entry {
    double angle;
    Point p;
  };
  std::vector<Entry> entries;
  for (int dy = -radius - 1; dy <= radius + 1; ++dy) {
    for (int dx = -radius - 1; dx <= radius + 1; ++dx) {
      if (ring_index(dx, dy) != radius) continue;
      const Point p{center.x + dx, center.y + dy};
      if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) continue;
      double a = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
      if (a < 0) a += 2.0 * std::numbers::pi;
      entries.push_back({a, p});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
  ring.coords.reserve(entries.size());
  for (const auto& e : entries) ring.coords.push_back(e.p);
  return ring;
}

bool in_disk(double dx, double dy, double radius) { return dx * dx + dy * dy <= radius * radius; }

int disk_area(double radius) {
  if (radius < 0) return 0;
  const int r = static_cast<int>(std::floor(radius));
  int n = 0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (in_disk(dx, dy, radius)) ++n;
  return n;
}

std::string to_string(Provenance p) { return p == Provenance::detected ? "detected" : "interpolated"; }

std::uint8_t lower_median(std::vector<std::uint8_t> values) {
  if (values.empty()) return 0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

BallCrop crop_ball(const GrayImage& img, const BallRegion& ball) {
  if (!(ball.radius > 0)) throw Error("crop_ball: ball radius must be positive");
  const Point c{static_cast<int>(std::lround(ball.center.x)), static_cast<int>(std::lround(ball.center.y))};
  if (!img.contains(c)) throw Error("crop_ball: ball centre outside image");

  BallCrop crop;
  crop.radius = static_cast<int>(std::lround(ball.radius));
  crop.radius = std::max(crop.radius, 1);
  const int side = 2 * crop.radius + 1;
  crop.origin = {c.x - crop.radius, c.y - crop.radius};
  crop.center = {crop.radius, crop.radius};

  std::vector<std::uint8_t> border;
  bool clipped = false;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const bool on_border = x == 0 || y == 0 || x == side - 1 || y == side - 1;
      const int sx = crop.origin.x + x;
      const int sy = crop.origin.y + y;
      if (!img.contains(sx, sy)) {
        clipped = true;
        continue;
      }
      if (on_border) border.push_back(img.at(sx, sy));
    }
  }
  std::uint8_t fill = 0;
  if (clipped) {
    if (border.empty()) {
      std::vector<std::uint8_t> inside;
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
          if (img.contains(crop.origin.x + x, crop.origin.y + y))
            inside.push_back(img.at(crop.origin.x + x, crop.origin.y + y));
      fill = lower_median(std::move(inside));
    } else {
      fill = lower_median(std::move(border));
    }
  }

  crop.image = GrayImage(side, side, fill);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x)
      if (img.contains(crop.origin.x + x, crop.origin.y + y))
        crop.image.at(x, y) = img.at(crop.origin.x + x, crop.origin.y + y);
  return crop;
}

RealImage to_real(const GrayImage& img) {
  RealImage out(img.width(), img.height());
  std::transform(img.data().begin(), img.data().end(), out.data().begin(),
                 [](std::uint8_t v) { return static_cast<double>(v); });
  return out;
}

RealImage gaussian_blur(const GrayImage& img, double sigma) {
  RealImage src = to_real(img);
  if (!(sigma > 0) || img.empty()) return src;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  const double sum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (auto& k : kernel) k /= sum;

  const int w = img.width();
  const int h = img.height();
  RealImage tmp(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * src.at(std::clamp(x + i, 0, w - 1), y);
      tmp.at(x, y) = acc;
    }
  RealImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * tmp.at(x, std::clamp(y + i, 0, h - 1));
      out.at(x, y) = acc;
    }
  return out;
}

}  // namespace voidinspect
