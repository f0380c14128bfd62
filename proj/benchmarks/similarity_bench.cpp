#include "cinesim/evaluation.hpp"
#include "cinesim/fusion.hpp"
#include "cinesim/random.hpp"
#include "cinesim/similarity.hpp"

#include <benchmark/benchmark.h>

using namespace cinesim;

namespace {

FeatureMatrix features(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  FeatureMatrix f{"x", {}, Matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d))};
  for (std::size_t i = 0; i < n; ++i) f.doc_ids.push_back("m" + std::to_string(1000 + i));
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = rng.uniform();
  return f;
}

void BM_CosineMatrix(benchmark::State& state) {
  const auto f = features(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(cosine_matrix(f));
}
BENCHMARK(BM_CosineMatrix)->Args({160, 55})->Args({160, 208})->Args({160, 5000})->Unit(benchmark::kMicrosecond);

void BM_Evaluate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Evaluator ev(GroundTruth::from_similarity(cosine_matrix(features(n, 40, 2))));
  const auto model = cosine_matrix(features(n, 40, 3));
  for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate(model));
}
BENCHMARK(BM_Evaluate)->Arg(160)->Unit(benchmark::kMicrosecond);

void BM_FitWeightsGrid(benchmark::State& state) {
  const Evaluator ev(GroundTruth::from_similarity(cosine_matrix(features(160, 40, 4))));
  std::vector<SimilarityMatrix> ms = {cosine_matrix(features(160, 40, 5)), cosine_matrix(features(160, 40, 6))};
  ms[0].modality = "a";
  ms[1].modality = "b";
  for (auto _ : state) benchmark::DoNotOptimize(fit_weights(ms, ev));
}
BENCHMARK(BM_FitWeightsGrid)->Unit(benchmark::kMillisecond);

}  // namespace
