#include <benchmark/benchmark.h>

#include <random>

#include "harmtree/builder.hpp"
#include "harmtree/step_function.hpp"
#include "support/generators.hpp"

using namespace harmtree;

namespace {

void BM_ExtendStep(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::mt19937_64 rng(1);
  const Tree t = random_tree(2, 3, 3 + n, 17);
  const auto space = ValueSpace::scalar();
  const auto phi = gen::harmonic(rng, t, space, 3);
  const auto h = gen::step(rng, t, space, 3 + n);
  for (auto _ : state) benchmark::DoNotOptimize(extend_step(t, phi, h, n));
}
BENCHMARK(BM_ExtendStep)->DenseRange(1, 4);

void BM_Build(benchmark::State& state) {
  const auto depth = static_cast<std::uint32_t>(state.range(0));
  const Tree t = build_homogeneous(2, depth);
  const TargetEnumeration targets(t, ValueSpace::scalar(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(build_frequently_universal(t, targets, depth));
}
BENCHMARK(BM_Build)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_L0Distance(benchmark::State& state) {
  const auto level = static_cast<std::uint32_t>(state.range(0));
  std::mt19937_64 rng(2);
  const Tree t = random_tree(2, 2, level, 5);
  const auto space = ValueSpace::scalar();
  const auto a = gen::step(rng, t, space, level);
  const auto b = gen::step(rng, t, space, level);
  for (auto _ : state) benchmark::DoNotOptimize(l0_distance(t, a, b));
}
BENCHMARK(BM_L0Distance)->Arg(6)->Arg(10)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
