#pragma once

#include <cstdint>
#include <vector>

#include "voidinspect/raster.hpp"

namespace voidinspect {

struct SignTag;
using SignMap = Raster<std::int8_t, SignTag>;

struct LogResponse {
  RealImage values;
  double sigma = 0.0;
};

struct EdgeMask {
  BinaryMask edges;
  /// Sign of the LoG response at every pixel (-1, 0, +1). Bright structures
  /// are negative inside, so a void boundary pairs -1 (void side) with +1.
  SignMap sign;

  int width() const { return edges.width(); }
  int height() const { return edges.height(); }
  bool is_edge(Point p) const { return edges.contains(p) && edges.at(p) != 0; }
};

struct ContourSet {
  /// Closed 8-connected loops in traversal order; every pixel has exactly two
  /// loop neighbours.
  std::vector<std::vector<Point>> closed;
  /// Edge pixels that are on no closed loop, in raster order.
  std::vector<Point> open;
};

struct EdgeParams {
  double sigma = 1.5;
  double min_slope = 1.0;

  void validate() const;
};

/// Scale-normalised (sigma^2) Laplacian-of-Gaussian kernel of side
/// 2*ceil(3 sigma)+1, shifted to sum exactly to zero.
RealImage log_kernel(double sigma);

/// Convolution with log_kernel(sigma); borders replicate the edge pixels.
/// Throws if the crop is smaller than the kernel.
LogResponse log_response(const GrayImage& crop, double sigma);

/// Zero crossings: a pixel is an edge when a 4-neighbour has the opposite
/// response sign and the two responses differ by at least min_slope.
EdgeMask edge_mask(const LogResponse& resp, double min_slope = 1.0);

ContourSet classify_contours(const EdgeMask& edges);

/// Even-odd fill: a pixel is set when it lies strictly inside an odd number
/// of loops, or on any loop.
BinaryMask fill_closed(const ContourSet& contours, int width, int height);

/// Pixels strictly enclosed by `loop` (not 4-reachable from the raster border).
BinaryMask loop_interior(std::span<const Point> loop, int width, int height);

}  // namespace voidinspect
