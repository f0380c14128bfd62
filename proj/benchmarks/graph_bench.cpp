#include "cinesim/graph.hpp"
#include "cinesim/random.hpp"
#include "cinesim/similarity.hpp"

#include <benchmark/benchmark.h>

using namespace cinesim;

namespace {

MovieGraph random_graph(std::size_t n, std::size_t k) {
  Rng rng(3);
  FeatureMatrix f{"x", {}, Matrix(static_cast<Eigen::Index>(n), 12)};
  for (std::size_t i = 0; i < n; ++i) f.doc_ids.push_back("m" + std::to_string(10000 + i));
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = rng.gamma(0.5);
  return build_graph(cosine_matrix(f), k);
}

void BM_Louvain(benchmark::State& state) {
  const auto g = random_graph(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(louvain(g));
}
BENCHMARK(BM_Louvain)->Arg(160)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ExportJson(benchmark::State& state) {
  const auto g = random_graph(160, 5);
  const auto c = louvain(g);
  for (auto _ : state) benchmark::DoNotOptimize(export_json(g, c));
}
BENCHMARK(BM_ExportJson)->Unit(benchmark::kMicrosecond);

}  // namespace
