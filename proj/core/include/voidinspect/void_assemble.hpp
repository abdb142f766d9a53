#pragma once

#include <span>
#include <vector>

#include "voidinspect/edge_detect.hpp"
#include "voidinspect/raster.hpp"
#include "voidinspect/void_scan.hpp"

namespace voidinspect {

struct AssemblyParams {
  /// Largest |span mean - void mean| that still counts as the same void.
  double intensity_tol = 6.0;
  int a_min = 9;

  void validate() const;
};

/// Stack of 1D spans grown inward ring by ring.
struct Void2D {
  std::vector<Void1D> spans;
  std::vector<Point> pixels;
  double mean_intensity = 0.0;  // pixel-weighted over member spans
  bool active = true;
};

struct VoidRegion {
  int label = 0;
  std::vector<Point> pixels;  // raster order
  int area = 0;
  PointF centroid;
  Box bbox;
};

struct InspectionReport {
  BallRegion ball;
  int ball_area = 0;
  std::vector<VoidRegion> regions;
  int total_void_area = 0;
  double void_percentage = 0.0;
};

/// Walks rings from the outermost inward. A span joins every active void it
/// touches (8-adjacent to that void's pixels on the previous ring) whose mean
/// is within intensity_tol; joined voids merge. A span that joins nothing
/// starts a new void, and a void that receives nothing on a ring is closed
/// for good.
std::vector<Void2D> assemble_2d(const RingSpans& spans, const AssemblyParams& p);

/// Union of all void pixels and the closed-contour fill, split into
/// 8-connected components; components smaller than a_min are dropped and the
/// rest numbered 1..K by decreasing area.
std::vector<VoidRegion> finalize_voids(std::span<const Void2D> voids, const BinaryMask& closed_fill,
                                       const AssemblyParams& p);

/// Regions of an arbitrary mask, labelled the same way as finalize_voids.
std::vector<VoidRegion> regions_from_mask(const BinaryMask& mask, int a_min);

/// 100 * void area / ball area.
double void_percentage(int void_area, int ball_area);
/// Two-decimal rounding used in reports.
double round_percentage(double pct);

/// Ball area is the pixel count of the ball disk. Throws if it is zero.
InspectionReport measure(std::vector<VoidRegion> regions, const BallRegion& ball);

struct InspectParams {
  EdgeParams edges;
  ScanParams scan;
  AssemblyParams assembly;
  /// Outer rings excluded from analysis; r_max = ball radius - rim_margin.
  int rim_margin = 1;

  void validate() const;
};

/// Crop prepared for void analysis: everything beyond r_max is replaced by
/// the median of the analysed disk so the ball rim does not register as an
/// edge.
struct PreparedBall {
  GrayImage image;
  Point center;
  int r_max = 0;
};

PreparedBall prepare_ball(const BallCrop& crop, const InspectParams& p);

/// LoG edges of the prepared crop, restricted to rings <= r_max.
EdgeMask ball_edges(const PreparedBall& ball, const EdgeParams& p);

/// Region pixels are reported in source image coordinates and clipped to the
/// ball disk.
InspectionReport inspect_ball(const BallCrop& crop, const BallRegion& ball, const InspectParams& p);

/// inspect_ball on a precomputed edge mask.
InspectionReport proposed_detect(const BallCrop& crop, const PreparedBall& prepared, const EdgeMask& edges,
                                 const BallRegion& ball, const InspectParams& p);

/// Shared tail of both detectors: finalize, clip, translate, measure.
InspectionReport report_from_voids(std::span<const Void2D> voids, const BinaryMask& closed_fill, const BallCrop& crop,
                                   const BallRegion& ball, const AssemblyParams& p);

}  // namespace voidinspect
