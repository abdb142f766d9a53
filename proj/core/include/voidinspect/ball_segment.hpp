#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "voidinspect/raster.hpp"

namespace voidinspect {

/// Tuning for splitting a multi-ball radiograph into individual balls.
struct SegmentationParams {
  int slice_height = 300;  // rows per threshold slice
  int slice_width = 400;   // columns per threshold slice
  int threshold_window = 31;
  int threshold_offset = 5;
  int radius_bin_width = 4;
  double gap_factor = 1.5;
  /// Centre-y tolerance for grouping balls into rows. Unset means half the
  /// median radius of the balls being grouped.
  std::optional<double> row_tolerance;
  /// Hough search range.
  int min_radius = 8;
  int max_radius = 40;

  void validate() const;
};

struct RadiusRange {
  int min = 3;
  int max = 3;
};

struct RadiusHistogram {
  int bin_width = 1;
  std::map<int, int> counts;  // quantized radius -> count
  int mode_radius = 0;
};

/// Adaptive mean threshold applied independently inside each slice, so a
/// slice's local means never see pixels from a neighbouring slice.
/// Foreground = darker than (local mean - offset).
BinaryMask threshold_by_slices(const GrayImage& img, const SegmentationParams& p);

/// Circular Hough transform voted by the boundary pixels of the mask.
std::vector<BallRegion> detect_circles(const BinaryMask& mask, RadiusRange range);

int quantize_radius(double radius, int bin_width);

struct RadiusFilterResult {
  std::vector<BallRegion> kept;
  RadiusHistogram histogram;
};

/// Keeps balls whose quantized radius equals the histogram mode; ties go to
/// the larger bin. Throws on empty input.
RadiusFilterResult filter_by_radius_mode(std::span<const BallRegion> balls, int bin_width);

struct InterpolationResult {
  std::vector<BallRegion> balls;
  /// Fewer than two balls were given; nothing was interpolated.
  bool too_few_balls = false;
};

/// Groups balls into rows, then fills each over-long neighbour gap with
/// equally spaced interpolated balls. Input balls are preserved verbatim and
/// new ones are appended.
InterpolationResult interpolate_missing(std::vector<BallRegion> balls, const SegmentationParams& p);

/// threshold_by_slices -> detect_circles -> filter_by_radius_mode ->
/// interpolate_missing, sorted row-major. Throws if no circle is found.
std::vector<BallRegion> segment_balls(const GrayImage& img, const SegmentationParams& p);

/// Row-major order: rows by centre-y (within `row_tolerance`), then x.
void sort_row_major(std::vector<BallRegion>& balls, double row_tolerance);

}  // namespace voidinspect
