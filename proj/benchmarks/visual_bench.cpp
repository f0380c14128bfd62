#include "cinesim/image.hpp"
#include "cinesim/optical_flow.hpp"
#include "cinesim/visual_features.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace cinesim;

namespace {

Frame textured(int w, int h, double dx) {
  Frame f = Frame::filled(w, h, 0, 0, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = x - dx;
      const double v = 128 + 50 * std::sin(u / 4.0) * std::cos(y / 5.0) + 30 * std::sin((u + y) / 9.0);
      auto* p = f.pixel(x, y);
      p[0] = static_cast<std::uint8_t>(v);
      p[1] = static_cast<std::uint8_t>(255 - v);
      p[2] = static_cast<std::uint8_t>(v / 2);
    }
  }
  return f;
}

void BM_OpticalFlow(benchmark::State& state) {
  const auto a = textured(500, 281, 0), b = textured(500, 281, 3);
  for (auto _ : state) benchmark::DoNotOptimize(optical_flow(a, b));
}
BENCHMARK(BM_OpticalFlow)->Unit(benchmark::kMillisecond);

void BM_FrameFeatures(benchmark::State& state) {
  const auto a = textured(500, 281, 0), b = textured(500, 281, 2);
  for (auto _ : state) {
    VisualFeatureExtractor ex;
    ex.push(a, {});
    ex.push(b, {});
    benchmark::DoNotOptimize(ex.frames());
  }
}
BENCHMARK(BM_FrameFeatures)->Unit(benchmark::kMillisecond);

}  // namespace
