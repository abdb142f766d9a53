#include "voidinspect/void_scan.hpp"

#include <algorithm>
#include <numeric>

namespace voidinspect {

namespace {
// Profile differences below this are treated as ties.
constexpr double kOrderEps = 1e-9;
}  // namespace

std::string to_string(AcceptanceRule rule) { return rule == AcceptanceRule::relative ? "relative" : "literal"; }

AcceptanceRule parse_acceptance_rule(const std::string& s) {
  if (s == "relative") return AcceptanceRule::relative;
  if (s == "literal") return AcceptanceRule::literal;
  throw Error("unknown acceptance_rule '" + s + "' (expected relative or literal)");
}

void ScanParams::validate() const {
  if (!(thr_1d >= 0)) throw Error("scan: thr_1d must be >= 0");
  if (!(max_span_fraction > 0 && max_span_fraction <= 1)) throw Error("scan: max_span_fraction must be in (0, 1]");
  if (!(order_sigma >= 0)) throw Error("scan: order_sigma must be >= 0");
}

RingProfile make_ring_profile(RingSample ring, const GrayImage& crop, const RealImage& order, const EdgeMask& edges) {
  RingProfile out;
  out.values.reserve(ring.size());
  out.order.reserve(ring.size());
  out.edge.reserve(ring.size());
  for (const Point& p : ring.coords) {
    out.values.push_back(crop.at(p));
    out.order.push_back(order.at(p));
    out.edge.push_back(edges.is_edge(p) ? 1 : 0);
  }
  out.ring = std::move(ring);
  return out;
}

RingProfile make_ring_profile(RingSample ring, std::vector<double> values, std::vector<std::uint8_t> edge) {
  if (values.size() != ring.size() || edge.size() != ring.size())
    throw Error("make_ring_profile: values and edge flags must match the ring length");
  RingProfile out;
  out.order = values;
  out.values = std::move(values);
  out.edge = std::move(edge);
  out.ring = std::move(ring);
  return out;
}

bool is_positive_edge(const RingProfile& ring, std::size_t beta) {
  if (ring.size() < 3 || !ring.edge[beta]) return false;
  const auto& o = ring.order;
  const double prev = o[ring.ring.wrap(static_cast<std::ptrdiff_t>(beta) - 1)];
  const double next = o[ring.ring.wrap(static_cast<std::ptrdiff_t>(beta) + 1)];
  return o[beta] - prev > kOrderEps && next - o[beta] > kOrderEps;
}

bool is_negative_edge(const RingProfile& ring, std::size_t beta) {
  if (ring.size() < 3 || !ring.edge[beta]) return false;
  const auto& o = ring.order;
  const double prev = o[ring.ring.wrap(static_cast<std::ptrdiff_t>(beta) - 1)];
  const double next = o[ring.ring.wrap(static_cast<std::ptrdiff_t>(beta) + 1)];
  return prev - o[beta] > kOrderEps && o[beta] - next > kOrderEps;
}

std::vector<std::size_t> find_positive_edges(const RingProfile& ring) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < ring.size(); ++b)
    if (is_positive_edge(ring, b)) out.push_back(b);
  return out;
}

std::optional<SpanExtent> trace_span(const RingProfile& ring, std::size_t start, const ScanParams& p) {
  const std::size_t n = ring.size();
  if (n < 3) return std::nullopt;
  // Reaching the cap without a negative edge rejects the span.
  const auto cap = static_cast<std::size_t>(p.max_span_fraction * static_cast<double>(n));
  std::size_t length = 1;
  if (length >= cap) return std::nullopt;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t b = ring.ring.wrap(static_cast<std::ptrdiff_t>(start + k));
    if (is_negative_edge(ring, b)) return SpanExtent{start, b, length};
    if (++length >= cap) return std::nullopt;
  }
  return std::nullopt;
}

namespace {

struct SpanStats {
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
};

SpanStats span_stats(const RingProfile& ring, const SpanExtent& s) {
  SpanStats st;
  st.max = -1e300;
  st.min = 1e300;
  double sum = 0.0;
  for (std::size_t k = 0; k < s.length; ++k) {
    const double v = ring.values[ring.ring.wrap(static_cast<std::ptrdiff_t>(s.start + k))];
    sum += v;
    st.max = std::max(st.max, v);
    st.min = std::min(st.min, v);
  }
  st.mean = sum / static_cast<double>(s.length);
  return st;
}

bool accepted(const SpanStats& st, const ScanParams& p, double background) {
  if (p.acceptance_rule == AcceptanceRule::literal) return st.mean > p.thr_1d && (st.max - st.min) > p.thr_1d;
  return st.mean - background >= p.thr_1d && st.max - background >= p.thr_1d;
}

Void1D make_void(const RingProfile& ring, const SpanExtent& s, const SpanStats& st, double background) {
  Void1D v;
  v.r = ring.ring.radius;
  v.beta_start = s.start;
  v.beta_end = s.end;
  v.mean_intensity = st.mean;
  v.span_max = st.max;
  v.span_min = st.min;
  v.background = background;
  v.pixels.reserve(s.length);
  for (std::size_t k = 0; k < s.length; ++k)
    v.pixels.push_back(ring.ring.coords[ring.ring.wrap(static_cast<std::ptrdiff_t>(s.start + k))]);
  return v;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::optional<Void1D> scan_span(const RingProfile& ring, std::size_t start, const ScanParams& p, double background) {
  const auto extent = trace_span(ring, start, p);
  if (!extent) return std::nullopt;
  const SpanStats st = span_stats(ring, *extent);
  if (!accepted(st, p, background)) return std::nullopt;
  return make_void(ring, *extent, st, background);
}

double ring_background(const RingProfile& ring, const std::vector<SpanExtent>& candidates) {
  std::vector<bool> covered(ring.size(), false);
  for (const SpanExtent& s : candidates)
    for (std::size_t k = 0; k < s.length; ++k) covered[ring.ring.wrap(static_cast<std::ptrdiff_t>(s.start + k))] = true;
  std::vector<double> outside;
  for (std::size_t b = 0; b < ring.size(); ++b)
    if (!covered[b]) outside.push_back(ring.values[b]);
  return outside.empty() ? median(ring.values) : median(std::move(outside));
}

std::vector<Void1D> scan_ring(const RingProfile& ring, const ScanParams& p) {
  std::vector<SpanExtent> candidates;
  for (std::size_t start : find_positive_edges(ring))
    if (auto s = trace_span(ring, start, p)) candidates.push_back(*s);
  if (candidates.empty()) return {};
  const double background = ring_background(ring, candidates);

  // Overlapping candidates are always nested (they share a negative edge), so
  // trying the longest first keeps the outcome independent of where beta = 0
  // happens to fall.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SpanExtent& a, const SpanExtent& b) { return a.length > b.length; });
  std::vector<bool> taken(ring.size(), false);
  std::vector<Void1D> out;
  for (const SpanExtent& s : candidates) {
    bool free = true;
    for (std::size_t k = 0; k < s.length && free; ++k)
      free = !taken[ring.ring.wrap(static_cast<std::ptrdiff_t>(s.start + k))];
    if (!free) continue;
    const SpanStats st = span_stats(ring, s);
    if (!accepted(st, p, background)) continue;
    for (std::size_t k = 0; k < s.length; ++k) taken[ring.ring.wrap(static_cast<std::ptrdiff_t>(s.start + k))] = true;
    out.push_back(make_void(ring, s, st, background));
  }
  std::sort(out.begin(), out.end(), [](const Void1D& a, const Void1D& b) { return a.beta_start < b.beta_start; });
  return out;
}

RingSpans detect_1d_voids(const GrayImage& crop, const EdgeMask& edges, Point center, int r_max, const ScanParams& p) {
  p.validate();
  if (r_max < 1) throw Error("detect_1d_voids: r_max must be >= 1");
  if (!edges.edges.same_shape(crop)) throw Error("detect_1d_voids: edge mask does not match the crop");
  const RealImage order = gaussian_blur(crop, p.order_sigma);
  RingSpans out;
  for (int r = r_max; r >= 1; --r) {
    RingProfile ring = make_ring_profile(ring_pixels(center, r, crop.width(), crop.height()), crop, order, edges);
    std::vector<Void1D> spans = scan_ring(ring, p);
    if (!spans.empty()) out.emplace(r, std::move(spans));
  }
  return out;
}

}  // namespace voidinspect
