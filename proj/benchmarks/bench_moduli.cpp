#include <benchmark/benchmark.h>

#include "densemet/build.hpp"
#include "densemet/cantor.hpp"
#include "densemet/lab.hpp"

using namespace densemet;

namespace {

FiniteMetricSpace instance(std::int64_t n) {
  return lab::random_space(lab::InstanceMode::closure, static_cast<std::size_t>(n), 7);
}

}  // namespace

static void BM_DoublingExhaustive(benchmark::State& state) {
  const auto s = instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(doubling_constant(s, 2.0).constant);
}
BENCHMARK(BM_DoublingExhaustive)->DenseRange(8, 16, 4);

static void BM_DoublingSampled(benchmark::State& state) {
  const auto s = instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(doubling_constant(s, 2.0).constant);
}
BENCHMARK(BM_DoublingSampled)->RangeMultiplier(2)->Range(32, 128);

static void BM_Bottleneck(benchmark::State& state) {
  const auto s = instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bottleneck_matrix(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Bottleneck)->RangeMultiplier(2)->Range(16, 512)->Complexity();

static void BM_UpConstant(benchmark::State& state) {
  const auto s = instance(state.range(0));
  const double r_min = s.min_positive_distance();
  for (auto _ : state) benchmark::DoNotOptimize(up_constant(s, r_min).c_star);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UpConstant)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void BM_Amalgamate(benchmark::State& state) {
  const auto d = instance(state.range(0));
  const double eps = d.diameter() / 8.0;
  const auto partition = carve_partition(d, eps);
  std::vector<FiniteMetricSpace> pieces;
  for (const auto& piece : partition.pieces) {
    std::vector<std::string> labels;
    for (std::size_t i : piece) labels.push_back(d.labels()[i]);
    pieces.push_back(geometric_piece(labels, eps));
  }
  for (auto _ : state) benchmark::DoNotOptimize(amalgamate_metric(d, partition, pieces));
}
BENCHMARK(BM_Amalgamate)->RangeMultiplier(2)->Range(64, 512);

static void BM_ApproximateDoubling(benchmark::State& state) {
  const auto d = instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(approximate_doubling(d, d.diameter() / 8.0));
}
BENCHMARK(BM_ApproximateDoubling)->RangeMultiplier(2)->Range(32, 256);

static void BM_GenerateType(benchmark::State& state) {
  const TypeBits target = TypeBits::all()[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(generate_type(target, 7, 1));
  state.SetLabel(target.str());
}
BENCHMARK(BM_GenerateType)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
