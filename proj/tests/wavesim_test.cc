#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "roughwave/coeff.h"
#include "roughwave/numerics.h"
#include "roughwave/wavesim.h"

namespace roughwave {
namespace {

constexpr double kPi = std::numbers::pi;

coeff::Coefficient Constant(double v) {
  coeff::BaselineParams p;
  p.value = v;
  return coeff::MakeBaseline("constant", p);
}

coeff::Coefficient Smooth() {
  coeff::BaselineParams p;
  p.base = 1.5;
  p.amplitude = 0.5;
  return coeff::MakeBaseline("smooth", p);
}

// u = sin(k pi x) cos(k pi t) gives u_x(t, 0) = k pi cos(k pi t), so the
// boundary flux over one period T = 2 is (k pi)^2 = 4 E(0).
TEST(Evolve, BoundaryFluxOfStandingModes) {
  wavesim::EvolveOptions o;
  o.resolution = 1024;
  for (int k = 1; k <= 4; ++k) {
    const auto tr = wavesim::Evolve(
        Constant(1.0), [k](double x) { return std::sin(k * kPi * x); }, [](double) { return 0.0; },
        2.0, o);
    std::vector<double> sq(tr.trace0.size());
    for (size_t l = 0; l < sq.size(); ++l) sq[l] = tr.trace0[l] * tr.trace0[l];
    const double exact = k * k * kPi * kPi;
    EXPECT_NEAR(Trapezoid(sq, tr.dt), exact, 1e-3 * exact) << k;
  }
}

TEST(Evolve, MatchesStandingWave) {
  wavesim::EvolveOptions o;
  o.resolution = 512;
  const double T = 1.3;
  const auto tr = wavesim::Evolve(
      Constant(1.0), [](double x) { return std::sin(kPi * x); }, [](double) { return 0.0; }, T, o);
  double err = 0.0;
  for (int i = 0; i <= tr.n; ++i) {
    err = std::max(err, std::abs(tr.u_final[i] - std::sin(kPi * i * tr.dx) * std::cos(kPi * T)));
  }
  EXPECT_LT(err, 1e-5);
}

TEST(Evolve, ConservesDiscreteEnergies) {
  wavesim::EvolveOptions o;
  o.resolution = 512;
  o.energy_orders = 2;
  const auto tr = wavesim::Evolve(
      Smooth(), [](double x) { return std::sin(kPi * x) - 0.2 * std::sin(3 * kPi * x); },
      [](double x) { return std::sin(2 * kPi * x); }, 4.0, o);
  for (int k = 0; k <= 2; ++k) EXPECT_LT(tr.EnergyDrift(k), 1e-8) << k;
}

TEST(Evolve, ValidatesArguments) {
  const auto zero = [](double) { return 0.0; };
  wavesim::EvolveOptions o;
  o.resolution = 1000;
  EXPECT_THROW(wavesim::Evolve(Constant(1.0), zero, zero, 1.0, o), std::invalid_argument);
  o.resolution = 256;
  o.cfl = 1.2;
  EXPECT_THROW(wavesim::Evolve(Constant(1.0), zero, zero, 1.0, o), std::invalid_argument);
  o.cfl = 0.9;
  EXPECT_THROW(wavesim::Evolve(Constant(1.0), zero, zero, 0.0, o), std::invalid_argument);
}

TEST(Evolve, StableStepHonoursCfl) {
  const auto omega = Smooth();
  const double dt = wavesim::StableStep(omega, 256, 0.9, 2.0);
  EXPECT_LE(dt, 0.9 * std::sqrt(omega.lower()) / 256 + 1e-15);
  EXPECT_NEAR(2.0 / dt, std::round(2.0 / dt), 1e-9);
}

// d'Alembert: with u(t, 0) = t^2 and rest data, u = (t - x)^2 for x < t < 1.
TEST(EvolveInhomogeneous, TravellingBoundaryValue) {
  wavesim::EvolveOptions o;
  o.resolution = 1024;
  const auto res = wavesim::EvolveInhomogeneous(
      Constant(1.0), {[](double t) { return t * t; }, [](double) { return 0.0; }}, 0.8, o);
  const auto& tr = res.trajectory;
  EXPECT_FALSE(res.incompatible_start);
  for (double x : {0.1, 0.3, 0.5, 0.9}) {
    const int i = static_cast<int>(std::lround(x * tr.n));
    const double exact = x < 0.8 ? (0.8 - x) * (0.8 - x) : 0.0;
    EXPECT_NEAR(tr.u_final[i], exact, 2e-3) << x;
  }
}

TEST(Sidewise, ReproducesStandingWave) {
  const auto one = Constant(1.0);
  const double dt = 1.0 / 512;
  const int levels = 2049;
  std::vector<double> u(levels, 0.0), ux(levels);
  for (int l = 0; l < levels; ++l) ux[l] = kPi * std::cos(kPi * l * dt);
  const auto side = wavesim::SidewiseEvolve(one, u, ux, dt, 0.0, 0.5, 256);
  const int i = static_cast<int>(side.x.size()) - 1;
  EXPECT_NEAR(side.x[i], 0.5, 1e-12);
  double err = 0.0;
  for (int l = side.first_valid[i]; l <= side.last_valid[i]; ++l) {
    const double t = side.t0 + l * side.dt;
    err = std::max(err, std::abs(side.fields[i][l] - std::sin(kPi * 0.5) * std::cos(kPi * t)));
  }
  EXPECT_LT(err, 1e-4);
}

TEST(Sidewise, RejectsClosingWindow) {
  std::vector<double> u(16, 0.0), ux(16, 1.0);
  EXPECT_THROW(wavesim::SidewiseEvolve(Constant(1.0), u, ux, 0.01, 0.0, 0.5, 64),
               std::invalid_argument);
}

TEST(Norms, SobolevInfOfSine) {
  const int n = 20000;
  const double dt = 2 * kPi / n;
  std::vector<double> s(n + 1);
  for (int i = 0; i <= n; ++i) s[i] = std::sin(i * dt);
  EXPECT_NEAR(wavesim::SobolevInfNorm(s, dt, 0), 1.0, 1e-8);
  EXPECT_NEAR(wavesim::SobolevInfNorm(s, dt, 1), 2.0, 1e-6);
}

TEST(Norms, TraceNormOrdering) {
  const double dt = 1e-3;
  std::vector<double> f(2001);
  for (size_t l = 0; l < f.size(); ++l) f[l] = std::sin(20 * l * dt);
  const double l2 = wavesim::TraceSobolevNorm(f, dt, 0.0);
  EXPECT_GT(wavesim::TraceSobolevNorm(f, dt, 0.5), l2);
  EXPECT_LT(wavesim::TraceDualNorm(f, dt, 1.0), l2);
  EXPECT_NEAR(wavesim::TraceDualNorm(f, dt, 0.0), l2, 1e-14 * l2);
  EXPECT_THROW(wavesim::TraceSobolevNorm(f, dt, -0.1), std::invalid_argument);
}

TEST(DOmega, SecondDerivativeOfSine) {
  const int n = 1024;
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = std::sin(2 * kPi * i / n);
  const auto d = wavesim::ApplyDOmega(f, Constant(2.0), 1);
  const double scale = 4 * kPi * kPi / 2.0;
  for (int i : {100, 256, 700}) EXPECT_NEAR(d[i], -scale * f[i], 1e-3 * scale);
}

TEST(Snapshots, ByteLayout) {
  wavesim::EvolveOptions o;
  o.resolution = 64;
  o.snapshot_stride = 10;
  const auto tr = wavesim::Evolve(
      Constant(1.0), [](double x) { return std::sin(kPi * x); }, [](double) { return 0.0; }, 0.5, o);
  const auto bytes = wavesim::SnapshotBytes(tr);
  ASSERT_FALSE(tr.snapshots.empty());
  EXPECT_EQ(bytes.size(), 4 + 4 + 8 + tr.snapshots.size() * 65 * sizeof(double));
}

}  // namespace
}  // namespace roughwave
