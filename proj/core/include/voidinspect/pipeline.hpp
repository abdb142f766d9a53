#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "voidinspect/ball_segment.hpp"
#include "voidinspect/baseline.hpp"
#include "voidinspect/void_assemble.hpp"

namespace voidinspect {

enum class Method { proposed, baseline };

std::string to_string(Method m);
Method parse_method(const std::string& s);

/// Runs fn(0..n-1) on up to `jobs` threads. The exception of the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct ImageInspection {
  std::vector<BallRegion> balls;        // row-major, interpolated balls last
  std::vector<InspectionReport> reports;  // parallel to balls
  std::vector<EdgeMask> edges;          // filled only when requested
};

/// Segments the image and inspects every ball with one method. Output order
/// does not depend on `jobs`.
ImageInspection inspect_image(const GrayImage& img, const SegmentationParams& seg, const InspectParams& inspect,
                              const BaselineParams& baseline, Method method, int jobs = 1,
                              bool keep_edges = false);

/// Same, with the balls supplied by the caller.
ImageInspection inspect_balls(const GrayImage& img, std::vector<BallRegion> balls, const InspectParams& inspect,
                              const BaselineParams& baseline, Method method, int jobs = 1, bool keep_edges = false);

}  // namespace voidinspect
