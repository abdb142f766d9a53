#include <benchmark/benchmark.h>

#include "voidinspect/baseline.hpp"
#include "voidinspect/pipeline.hpp"
#include "voidinspect/synth_bench.hpp"

using namespace voidinspect;

namespace {

SynthImage one_ball() {
  SynthSpec spec;
  spec.seed = 11;
  spec.voids = {{{6, -3, 5}, {-7, 5, 4}}};
  return generate(spec);
}

SynthImage grid(int rows, int cols) {
  SynthSpec spec;
  spec.grid_rows = rows;
  spec.grid_cols = cols;
  spec.seed = 12;
  for (int i = 0; i < rows * cols; ++i) spec.voids.push_back({{static_cast<double>(i % 7 - 3), 4, 5}});
  return generate(spec);
}

const BallRegion kBall{{25, 25}, 19, Provenance::detected};

void BM_LogResponse(benchmark::State& state) {
  const SynthImage s = one_ball();
  const BallCrop crop = crop_ball(s.image, kBall);
  for (auto _ : state) benchmark::DoNotOptimize(log_response(crop.image, 1.5));
}
BENCHMARK(BM_LogResponse);

void BM_Detect1d(benchmark::State& state) {
  const SynthImage s = one_ball();
  const InspectParams p;
  const PreparedBall prep = prepare_ball(crop_ball(s.image, kBall), p);
  const EdgeMask edges = ball_edges(prep, p.edges);
  for (auto _ : state) benchmark::DoNotOptimize(detect_1d_voids(prep.image, edges, prep.center, prep.r_max, p.scan));
}
BENCHMARK(BM_Detect1d);

void BM_InspectBall(benchmark::State& state) {
  const SynthImage s = one_ball();
  const BallCrop crop = crop_ball(s.image, kBall);
  for (auto _ : state) benchmark::DoNotOptimize(inspect_ball(crop, kBall, {}));
}
BENCHMARK(BM_InspectBall);

void BM_BaselineBall(benchmark::State& state) {
  const SynthImage s = one_ball();
  const BallCrop crop = crop_ball(s.image, kBall);
  for (auto _ : state) benchmark::DoNotOptimize(baseline_inspect_ball(crop, kBall, {}, {}));
}
BENCHMARK(BM_BaselineBall);

void BM_SegmentGrid(benchmark::State& state) {
  const SynthImage s = grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(segment_balls(s.image, {}));
}
BENCHMARK(BM_SegmentGrid)->Arg(4)->Arg(8);

void BM_InspectImage(benchmark::State& state) {
  const SynthImage s = grid(8, 8);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(inspect_image(s.image, {}, {}, {}, Method::proposed, jobs));
}
BENCHMARK(BM_InspectImage)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
