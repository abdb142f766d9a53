#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voidinspect/edge_detect.hpp"
#include "voidinspect/raster.hpp"

namespace voidinspect {

/// How a scanned span is judged against the ring background.
///   relative: mean - background >= thr and max - background >= thr
///   literal:  mean > thr and (max - min) > thr, on raw intensities
enum class AcceptanceRule { relative, literal };

std::string to_string(AcceptanceRule rule);
AcceptanceRule parse_acceptance_rule(const std::string& s);

struct ScanParams {
  double thr_1d = 6.0;
  double max_span_fraction = 0.5;
  AcceptanceRule acceptance_rule = AcceptanceRule::relative;
  /// Gaussian sigma of the profile used for the increasing/decreasing triple
  /// tests. 0 compares raw intensities.
  double order_sigma = 1.0;

  void validate() const;
};

/// One angular span on ring r, [beta_start, beta_end) cyclically; beta_end is
/// the negative-edge position and is not part of the span.
struct Void1D {
  int r = 0;
  std::size_t beta_start = 0;
  std::size_t beta_end = 0;
  std::vector<Point> pixels;
  double mean_intensity = 0.0;
  double span_max = 0.0;
  double span_min = 0.0;
  /// Ring background the span was judged against.
  double background = 0.0;
};

/// Everything the scanner reads along one ring.
struct RingProfile {
  RingSample ring;
  std::vector<double> values;  // raw intensities
  std::vector<double> order;   // profile for the triple tests
  std::vector<std::uint8_t> edge;

  std::size_t size() const { return ring.size(); }
};

RingProfile make_ring_profile(RingSample ring, const GrayImage& crop, const RealImage& order, const EdgeMask& edges);
/// Profile whose triple tests use the raw values.
RingProfile make_ring_profile(RingSample ring, std::vector<double> values, std::vector<std::uint8_t> edge);

bool is_positive_edge(const RingProfile& ring, std::size_t beta);
bool is_negative_edge(const RingProfile& ring, std::size_t beta);

/// Positions with order(b-1) < order(b) < order(b+1) (cyclic) on an edge pixel.
std::vector<std::size_t> find_positive_edges(const RingProfile& ring);

struct SpanExtent {
  std::size_t start = 0;
  std::size_t end = 0;     // negative edge position
  std::size_t length = 0;  // pixels in [start, end)
};

/// Walks from `start` to the first negative edge. Empty if the span would
/// exceed max_span_fraction of the ring.
std::optional<SpanExtent> trace_span(const RingProfile& ring, std::size_t start, const ScanParams& p);

/// trace_span followed by the acceptance test against `background`.
std::optional<Void1D> scan_span(const RingProfile& ring, std::size_t start, const ScanParams& p, double background);

/// Median of the ring values outside every traced candidate span; the
/// whole-ring median when nothing lies outside.
double ring_background(const RingProfile& ring, const std::vector<SpanExtent>& candidates);

/// All accepted, pairwise disjoint spans of one ring, ordered by beta_start.
std::vector<Void1D> scan_ring(const RingProfile& ring, const ScanParams& p);

using RingSpans = std::map<int, std::vector<Void1D>>;

/// Rings r_max down to 1 around `center`. Rings without accepted spans are
/// absent from the result.
RingSpans detect_1d_voids(const GrayImage& crop, const EdgeMask& edges, Point center, int r_max, const ScanParams& p);

}  // namespace voidinspect
