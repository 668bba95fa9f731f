#include <random>

#include <benchmark/benchmark.h>

#include "wastegrasp/detmath.hpp"

using namespace wastegrasp::detmath;

namespace {

std::vector<ImageAnnotations> random_images(std::size_t count) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 600.0);
  std::uniform_real_distribution<double> size(10.0, 80.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, 3);
  std::vector<ImageAnnotations> images(count);
  for (auto& im : images) {
    for (int g = 0; g < 8; ++g) {
      const BoundingBox box{pos(rng), pos(rng), size(rng), size(rng)};
      const int l = label(rng);
      im.ground_truths.push_back({box, l});
      im.detections.push_back({{box.cx + 4 * u(rng), box.cy + 4 * u(rng), box.w, box.h}, l, u(rng)});
      im.detections.push_back({{pos(rng), pos(rng), size(rng), size(rng)}, label(rng), u(rng)});
    }
  }
  return images;
}

void BM_AveragePrecision(benchmark::State& state) {
  const auto images = random_images(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(average_precision(images, 0.5));
  }
}
BENCHMARK(BM_AveragePrecision)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_YoloLoss(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  YoloGrid pred(s, 3, 20);
  YoloGrid target(s, 3, 20);
  for (std::size_t i = 0; i < target.anchors.size(); i += 7) {
    target.anchors[i].object = true;
    target.anchors[i].box = Eigen::Vector4d(0.5, 0.5, 0.2, 0.3);
    target.anchors[i].confidence = 1.0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(yolo_loss(pred, target));
  }
}
BENCHMARK(BM_YoloLoss)->Arg(13)->Arg(26)->Unit(benchmark::kMicrosecond);

}  // namespace
