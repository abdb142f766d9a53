#include "voidinspect/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace voidinspect {

std::string to_string(Method m) { return m == Method::proposed ? "proposed" : "baseline"; }

Method parse_method(const std::string& s) {
  if (s == "proposed") return Method::proposed;
  if (s == "baseline") return Method::baseline;
  throw Error("unknown method '" + s + "'");
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex m;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ImageInspection inspect_balls(const GrayImage& img, std::vector<BallRegion> balls, const InspectParams& inspect,
                              const BaselineParams& baseline, Method method, int jobs, bool keep_edges) {
  inspect.validate();
  baseline.validate();
  ImageInspection out;
  out.balls = std::move(balls);
  out.reports.resize(out.balls.size());
  if (keep_edges) out.edges.resize(out.balls.size());
  parallel_for(out.balls.size(), jobs, [&](std::size_t i) {
    const BallRegion& ball = out.balls[i];
    const BallCrop crop = crop_ball(img, ball);
    if (keep_edges) out.edges[i] = ball_edges(prepare_ball(crop, inspect), inspect.edges);
    out.reports[i] = method == Method::proposed ? inspect_ball(crop, ball, inspect)
                                                : baseline_inspect_ball(crop, ball, inspect, baseline);
  });
  return out;
}

ImageInspection inspect_image(const GrayImage& img, const SegmentationParams& seg, const InspectParams& inspect,
                              const BaselineParams& baseline, Method method, int jobs, bool keep_edges) {
  return inspect_balls(img, segment_balls(img, seg), inspect, baseline, method, jobs, keep_edges);
}

}  // namespace voidinspect
