#include <benchmark/benchmark.h>

#include "wastegrasp/tactile.hpp"

using namespace wastegrasp::tactile;

namespace {

TactileSequence slipping_sequence(const SensorModel& model) {
  return TactileSequence({to_gray(simulate_tactile_frame(50, 60, 0, 1, model)),
                          to_gray(simulate_tactile_frame(50, 60, 0, 2, model)),
                          to_gray(simulate_tactile_frame(50, 60, 12, 3, model)),
                          to_gray(simulate_tactile_frame(50, 60, 12, 4, model))});
}

void BM_DetectSlip(benchmark::State& state) {
  const auto seq = slipping_sequence(SensorModel{});
  const TactileConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect_slip(seq, cfg));
  }
}
BENCHMARK(BM_DetectSlip)->Unit(benchmark::kMillisecond);

void BM_OpenCross(benchmark::State& state) {
  const auto seq = slipping_sequence(SensorModel{});
  const auto diff = threshold_difference(seq.last(), seq.first(), 25);
  const auto se = StructuringElement::cross(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(open(diff, se));
  }
}
BENCHMARK(BM_OpenCross)->Arg(3)->Arg(7)->Arg(15)->Unit(benchmark::kMicrosecond);

void BM_SimulateFrame(benchmark::State& state) {
  const SensorModel model;
  const auto background = sensor_background(model);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_tactile_frame(background, 50, 60, 0, ++seed, model));
  }
}
BENCHMARK(BM_SimulateFrame)->Unit(benchmark::kMicrosecond);

}  // namespace
