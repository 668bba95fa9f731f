#include <random>

#include <benchmark/benchmark.h>

#include "clouds.hpp"
#include "wastegrasp/graspplan.hpp"

using namespace wastegrasp::grasp;

namespace {

void BM_EstimateSurface(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto cloud = clouds::box_surface(rng, static_cast<std::size_t>(state.range(0)), {0.04, 0.06, 0.15});
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_surface(cloud, 30));
  }
}
BENCHMARK(BM_EstimateSurface)->Arg(300)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_SelectPair(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto cloud = clouds::box_surface(rng, static_cast<std::size_t>(state.range(0)), {0.04, 0.06, 0.15});
  const GraspPlanConfig cfg;
  const auto features = estimate_surface(cloud, cfg.k_neighbors);
  const auto plane = grasp_plane(cloud);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_grasp_pair(cloud, features, plane, cfg));
  }
}
BENCHMARK(BM_SelectPair)->Arg(300)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace
