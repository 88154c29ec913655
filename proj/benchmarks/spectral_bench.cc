#include <cmath>

#include <benchmark/benchmark.h>

#include "roughwave/coeff.h"
#include "roughwave/fft.h"
#include "roughwave/modulus.h"

namespace {

using namespace roughwave;

std::vector<double> WeierstrassSamples(int intervals) {
  const auto w = coeff::MakeBaseline("weierstrass", {});
  return modulus::SampleFunction([&w](double x) { return w(x); }, intervals).values;
}

void BM_RealFft(benchmark::State& state) {
  std::vector<double> x(state.range(0));
  for (size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * i * i);
  for (auto _ : state) benchmark::DoNotOptimize(RealFft(x).data());
  state.SetBytesProcessed(state.iterations() * state.range(0) * sizeof(double));
}
BENCHMARK(BM_RealFft)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

void BM_DyadicBlocks(benchmark::State& state) {
  const auto f = WeierstrassSamples(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto s = modulus::DyadicBlocks(f, 10);
    benchmark::DoNotOptimize(s.norm_inf.data());
  }
}
BENCHMARK(BM_DyadicBlocks)->Arg(1 << 14)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_AnalyzeModulus(benchmark::State& state) {
  modulus::Samples s{WeierstrassSamples(static_cast<int>(state.range(0)))};
  for (auto _ : state) {
    auto r = modulus::AnalyzeModulus(s);
    benchmark::DoNotOptimize(r.tv.value);
  }
}
BENCHMARK(BM_AnalyzeModulus)->Arg(1 << 14)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

}  // namespace
