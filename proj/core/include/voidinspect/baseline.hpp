#pragma once

#include <utility>
#include <vector>

#include "voidinspect/edge_detect.hpp"
#include "voidinspect/void_assemble.hpp"

namespace voidinspect {

/// Reference detector: close open contours by joining nearby chain ends, then
/// fill whatever closes.
struct BaselineParams {
  double max_join_distance = 5.0;

  void validate() const;
};

/// Ends of open chains: open pixels with at most one open 8-neighbour.
std::vector<Point> chain_endpoints(const ContourSet& contours, int width, int height);

/// Greedy mutual-nearest pairing of endpoints within max_distance. Endpoints
/// that already touch are not paired.
std::vector<std::pair<Point, Point>> pair_endpoints(std::vector<Point> endpoints, double max_distance);

/// 8-connected straight segment from a to b, endpoints included.
std::vector<Point> line_pixels(Point a, Point b);

/// Edge mask with every bridge drawn in. Original edge pixels are kept.
EdgeMask bridge_open_contours(const EdgeMask& edges, double max_distance);

InspectionReport baseline_detect(const BallCrop& crop, const EdgeMask& edges, const BallRegion& ball,
                                 const BaselineParams& p, int a_min);

/// Same ball preparation and edges as inspect_ball, then baseline_detect.
InspectionReport baseline_inspect_ball(const BallCrop& crop, const BallRegion& ball, const InspectParams& inspect,
                                       const BaselineParams& p);

}  // namespace voidinspect
