#include <benchmark/benchmark.h>

#include "roughwave/oscillator.h"
#include "roughwave/quasimodes.h"
#include "roughwave/sequences.h"

namespace {

using namespace roughwave;

void BM_PeriodicPairBuild(benchmark::State& state) {
  for (auto _ : state) {
    auto pair = coeff::PeriodicPair::Build(0.02);
    benchmark::DoNotOptimize(pair.M());
  }
}
BENCHMARK(BM_PeriodicPairBuild)->Unit(benchmark::kMillisecond);

void BM_PairAlpha(benchmark::State& state) {
  const auto pair = coeff::PeriodicPair::Build(0.02);
  double y = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair.alpha(y));
    y += 0.0137;
  }
}
BENCHMARK(BM_PairAlpha);

void BM_Quasimode(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  auto params = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, j, coeff::SequenceMode::kScaled,
                                     coeff::ReferenceM());
  const auto pairs = coeff::BuildPairs(params);
  const auto omega = coeff::MakeCounterexampleDensity(params, pairs);
  const auto spec = quasimodes::SpecFor(params, pairs, j);
  for (auto _ : state) {
    auto q = quasimodes::SolveQuasimode(omega, spec);
    benchmark::DoNotOptimize(q.extreme_left);
  }
}
BENCHMARK(BM_Quasimode)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace
