#include "voidinspect/void_assemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace voidinspect {

void AssemblyParams::validate() const {
  if (!(intensity_tol >= 0)) throw Error("assembly: intensity_tol must be >= 0");
  if (a_min < 1) throw Error("assembly: a_min must be >= 1");
}

void InspectParams::validate() const {
  edges.validate();
  scan.validate();
  assembly.validate();
  if (rim_margin < 0) throw Error("assembly: rim_margin must be >= 0");
}

namespace {

struct VoidForest {
  std::vector<Void2D> voids;
  std::vector<int> parent;
  std::vector<bool> attached;  // received a span on the current ring

  int make(const Void1D& span) {
    Void2D v;
    v.pixels = span.pixels;
    v.mean_intensity = span.mean_intensity;
    v.spans.push_back(span);
    voids.push_back(std::move(v));
    parent.push_back(static_cast<int>(parent.size()));
    attached.push_back(true);
    return parent.back();
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  static void absorb(Void2D& into, Void2D&& from) {
    const double n_into = static_cast<double>(into.pixels.size());
    const double n_from = static_cast<double>(from.pixels.size());
    into.mean_intensity = (into.mean_intensity * n_into + from.mean_intensity * n_from) / (n_into + n_from);
    into.pixels.insert(into.pixels.end(), from.pixels.begin(), from.pixels.end());
    for (auto& s : from.spans) into.spans.push_back(std::move(s));
    from = Void2D{};
  }
  void attach(int root, const Void1D& span) {
    Void2D& v = voids[root];
    const double n_old = static_cast<double>(v.pixels.size());
    const double n_new = static_cast<double>(span.pixels.size());
    v.mean_intensity = (v.mean_intensity * n_old + span.mean_intensity * n_new) / (n_old + n_new);
    v.pixels.insert(v.pixels.end(), span.pixels.begin(), span.pixels.end());
    v.spans.push_back(span);
    attached[root] = true;
  }
  // Lowest index survives so ids stay in creation order.
  int merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    absorb(voids[a], std::move(voids[b]));
    parent[b] = a;
    attached[a] = attached[a] || attached[b];
    return a;
  }
};

constexpr Point kEight[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};

}  // namespace

std::vector<Void2D> assemble_2d(const RingSpans& spans, const AssemblyParams& p) {
  p.validate();
  if (spans.empty()) return {};
  if (spans.begin()->first < 1) throw Error("assemble_2d: ring indices must be >= 1");

  VoidForest forest;
  std::map<Point, int> prev_owner;  // pixels of ring r+1 -> void id
  const int r_top = spans.rbegin()->first;

  for (int r = r_top; r >= 1; --r) {
    std::fill(forest.attached.begin(), forest.attached.end(), false);
    std::map<Point, int> cur_owner;
    const auto it = spans.find(r);
    if (it != spans.end()) {
      for (const Void1D& span : it->second) {
        std::vector<int> matches;
        for (const Point& px : span.pixels)
          for (const Point& d : kEight) {
            const auto hit = prev_owner.find({px.x + d.x, px.y + d.y});
            if (hit == prev_owner.end()) continue;
            const int root = forest.find(hit->second);
            if (!forest.voids[root].active) continue;
            if (std::find(matches.begin(), matches.end(), root) != matches.end()) continue;
            if (std::abs(span.mean_intensity - forest.voids[root].mean_intensity) > p.intensity_tol) continue;
            matches.push_back(root);
          }
        int id;
        if (matches.empty()) {
          id = forest.make(span);
        } else {
          std::sort(matches.begin(), matches.end());
          id = matches.front();
          for (std::size_t k = 1; k < matches.size(); ++k) id = forest.merge(id, matches[k]);
          forest.attach(id, span);
        }
        for (const Point& px : span.pixels) cur_owner[px] = id;
      }
    }
    for (std::size_t i = 0; i < forest.voids.size(); ++i)
      if (forest.find(static_cast<int>(i)) == static_cast<int>(i) && !forest.attached[i]) forest.voids[i].active = false;
    prev_owner = std::move(cur_owner);
  }

  std::vector<Void2D> out;
  for (std::size_t i = 0; i < forest.voids.size(); ++i)
    if (forest.find(static_cast<int>(i)) == static_cast<int>(i)) out.push_back(std::move(forest.voids[i]));
  return out;
}

std::vector<VoidRegion> regions_from_mask(const BinaryMask& mask, int a_min) {
  const LabelMap labels = label_components(mask, Connectivity::eight);
  const int k = max_label(labels);
  std::vector<VoidRegion> regions(k);
  for (int y = 0; y < labels.height(); ++y)
    for (int x = 0; x < labels.width(); ++x) {
      const int l = labels.at(x, y);
      if (l) regions[l - 1].pixels.push_back({x, y});
    }
  std::erase_if(regions, [&](const VoidRegion& r) { return static_cast<int>(r.pixels.size()) < a_min; });
  // Components are already in order of first pixel; stable sort keeps that
  // as the tie-break.
  std::stable_sort(regions.begin(), regions.end(),
                   [](const VoidRegion& a, const VoidRegion& b) { return a.pixels.size() > b.pixels.size(); });
  for (std::size_t i = 0; i < regions.size(); ++i) {
    VoidRegion& r = regions[i];
    r.label = static_cast<int>(i) + 1;
    r.area = static_cast<int>(r.pixels.size());
    double sx = 0.0, sy = 0.0;
    r.bbox = {r.pixels.front().x, r.pixels.front().y, r.pixels.front().x, r.pixels.front().y};
    for (const Point& px : r.pixels) {
      sx += px.x;
      sy += px.y;
      r.bbox.x0 = std::min(r.bbox.x0, px.x);
      r.bbox.y0 = std::min(r.bbox.y0, px.y);
      r.bbox.x1 = std::max(r.bbox.x1, px.x);
      r.bbox.y1 = std::max(r.bbox.y1, px.y);
    }
    r.centroid = {sx / r.area, sy / r.area};
  }
  return regions;
}

std::vector<VoidRegion> finalize_voids(std::span<const Void2D> voids, const BinaryMask& closed_fill,
                                       const AssemblyParams& p) {
  p.validate();
  BinaryMask mask = closed_fill;
  for (const Void2D& v : voids)
    for (const Point& px : v.pixels) {
      if (!mask.contains(px)) throw Error("finalize_voids: void pixel outside the mask bounds");
      mask.at(px) = 1;
    }
  return regions_from_mask(mask, p.a_min);
}

double void_percentage(int void_area, int ball_area) {
  if (ball_area <= 0) throw Error("void_percentage: ball area must be positive");
  return 100.0 * static_cast<double>(void_area) / static_cast<double>(ball_area);
}

double round_percentage(double pct) { return std::round(pct * 100.0) / 100.0; }

InspectionReport measure(std::vector<VoidRegion> regions, const BallRegion& ball) {
  InspectionReport report;
  report.ball = ball;
  report.ball_area = disk_area(ball.radius);
  if (report.ball_area == 0) throw Error("measure: ball area is zero");
  report.regions = std::move(regions);
  for (const VoidRegion& r : report.regions) report.total_void_area += r.area;
  report.void_percentage = void_percentage(report.total_void_area, report.ball_area);
  return report;
}

PreparedBall prepare_ball(const BallCrop& crop, const InspectParams& p) {
  PreparedBall out;
  out.center = crop.center;
  out.r_max = std::max(1, crop.radius - p.rim_margin);
  out.image = crop.image;
  std::vector<std::uint8_t> inside;
  for (int y = 0; y < crop.image.height(); ++y)
    for (int x = 0; x < crop.image.width(); ++x)
      if (ring_index(x - crop.center.x, y - crop.center.y) <= out.r_max) inside.push_back(crop.image.at(x, y));
  const std::uint8_t fill = lower_median(std::move(inside));
  for (int y = 0; y < crop.image.height(); ++y)
    for (int x = 0; x < crop.image.width(); ++x)
      if (ring_index(x - crop.center.x, y - crop.center.y) > out.r_max) out.image.at(x, y) = fill;
  return out;
}

EdgeMask ball_edges(const PreparedBall& ball, const EdgeParams& p) {
  p.validate();
  EdgeMask edges = edge_mask(log_response(ball.image, p.sigma), p.min_slope);
  for (int y = 0; y < edges.height(); ++y)
    for (int x = 0; x < edges.width(); ++x)
      if (ring_index(x - ball.center.x, y - ball.center.y) > ball.r_max) edges.edges.at(x, y) = 0;
  return edges;
}

InspectionReport report_from_voids(std::span<const Void2D> voids, const BinaryMask& closed_fill, const BallCrop& crop,
                                   const BallRegion& ball, const AssemblyParams& p) {
  p.validate();
  BinaryMask mask = closed_fill;
  for (const Void2D& v : voids)
    for (const Point& px : v.pixels)
      if (mask.contains(px)) mask.at(px) = 1;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (!in_disk(x - crop.center.x, y - crop.center.y, ball.radius)) mask.at(x, y) = 0;

  std::vector<VoidRegion> regions = regions_from_mask(mask, p.a_min);
  for (VoidRegion& r : regions) {
    for (Point& px : r.pixels) px = crop.to_image(px);
    r.centroid.x += crop.origin.x;
    r.centroid.y += crop.origin.y;
    r.bbox = {r.bbox.x0 + crop.origin.x, r.bbox.y0 + crop.origin.y, r.bbox.x1 + crop.origin.x,
              r.bbox.y1 + crop.origin.y};
  }
  return measure(std::move(regions), ball);
}

InspectionReport proposed_detect(const BallCrop& crop, const PreparedBall& prepared, const EdgeMask& edges,
                                 const BallRegion& ball, const InspectParams& p) {
  p.validate();
  const ContourSet contours = classify_contours(edges);
  const BinaryMask fill = fill_closed(contours, edges.width(), edges.height());
  const RingSpans spans = detect_1d_voids(prepared.image, edges, prepared.center, prepared.r_max, p.scan);
  const std::vector<Void2D> voids = assemble_2d(spans, p.assembly);
  return report_from_voids(voids, fill, crop, ball, p.assembly);
}

InspectionReport inspect_ball(const BallCrop& crop, const BallRegion& ball, const InspectParams& p) {
  p.validate();
  const PreparedBall prepared = prepare_ball(crop, p);
  return proposed_detect(crop, prepared, ball_edges(prepared, p.edges), ball, p);
}

}  // namespace voidinspect
