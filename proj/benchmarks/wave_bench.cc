#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "roughwave/coeff.h"
#include "roughwave/observability.h"
#include "roughwave/wavesim.h"

namespace {

using namespace roughwave;

coeff::Coefficient Smooth() {
  coeff::BaselineParams p;
  p.base = 1.5;
  p.amplitude = 0.5;
  return coeff::MakeBaseline("smooth", p);
}

void BM_Leapfrog(benchmark::State& state) {
  const auto omega = Smooth();
  wavesim::EvolveOptions o;
  o.resolution = static_cast<int>(state.range(0));
  o.energy_orders = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto tr = wavesim::Evolve(
        omega, [](double x) { return std::sin(std::numbers::pi * x); }, [](double) { return 0.0; },
        2.0, o);
    benchmark::DoNotOptimize(tr.trace0.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Leapfrog)
    ->ArgsProduct({{256, 512, 1024, 2048}, {0, 2}})
    ->Unit(benchmark::kMillisecond);

void BM_ControlMap(benchmark::State& state) {
  const auto omega = Smooth();
  const int n = static_cast<int>(state.range(0));
  std::vector<double> f(observability::ControlLevels(omega, n, 0.9, 2.5), 1.0);
  for (auto _ : state) {
    auto s = observability::ControlForward(omega, n, 0.9, 2.5, f);
    auto back = observability::ControlTranspose(omega, n, 0.9, 2.5, s);
    benchmark::DoNotOptimize(back.data());
  }
}
BENCHMARK(BM_ControlMap)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Quotient(benchmark::State& state) {
  const auto omega = Smooth();
  observability::QuotientOptions o;
  o.resolution = static_cast<int>(state.range(0));
  const auto d = observability::RandomMixture(o.resolution, 16, 3);
  for (auto _ : state) {
    auto q = observability::ObservabilityQuotients(omega, d, 3.0, 2, o);
    benchmark::DoNotOptimize(q.data());
  }
}
BENCHMARK(BM_Quotient)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
