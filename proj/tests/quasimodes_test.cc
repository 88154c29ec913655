#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "roughwave/coeff.h"
#include "roughwave/quasimodes.h"
#include "roughwave/sequences.h"

namespace roughwave {
namespace {

constexpr double kPi = std::numbers::pi;

struct Scaled {
  coeff::CounterexampleParams params;
  coeff::PairMap pairs;
  coeff::Coefficient omega;
};

Scaled MakeScaled(int j_hi) {
  auto params = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, j_hi,
                                     coeff::SequenceMode::kScaled, coeff::ReferenceM());
  auto pairs = coeff::BuildPairs(params);
  auto omega = coeff::MakeCounterexampleDensity(params, pairs);
  return {std::move(params), std::move(pairs), std::move(omega)};
}

TEST(Quasimode, ConstantDensityIsACosine) {
  coeff::BaselineParams p;
  p.value = 4 * kPi * kPi;
  const auto omega = coeff::MakeBaseline("constant", p);
  quasimodes::QuasimodeSpec spec;
  spec.h = 8;
  spec.center = 0.375;
  const auto q = quasimodes::SolveQuasimode(omega, spec);
  double err = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) {
    const double arg = 2 * kPi * spec.h * (q.x[i] - spec.center);
    err = std::max(err, std::abs(q.phi[i] - std::cos(arg)));
    err = std::max(err, std::abs(q.dphi[i] + 2 * kPi * spec.h * std::sin(arg)) / (2 * kPi * spec.h));
  }
  EXPECT_LT(err, 1e-8);
  EXPECT_DOUBLE_EQ(q.phi[q.Index(0.375)], 1.0);
}

// Inside I_j the solution is w(h (x - m)); the interior mass is then
// (1/h) int_{-n/2}^{n/2} w^2, evaluated here from the pair by Simpson's rule.
TEST(Quasimode, AgreesWithClosedFormInsideInterval) {
  const auto s = MakeScaled(3);
  for (int j : {2, 3}) {
    const auto spec = quasimodes::SpecFor(s.params, s.pairs, j);
    const auto q = quasimodes::SolveQuasimode(s.omega, spec);
    const auto& r = s.params.record(j);
    EXPECT_LT(q.closed_form_error, 10 * q.tolerance);
    EXPECT_LT(q.reversibility_error, 10 * q.tolerance);
    EXPECT_NEAR(q.extreme_energy(), q.extreme_closed_form, 1e-9);

    const auto& pair = *s.pairs.at(j);
    const int n = 200000;
    const double half = r.n / 2.0;
    double mass = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double y = -half + 2 * half * i / n;
      const double wgt = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      mass += wgt * pair.w(y) * pair.w(y);
    }
    mass *= 2 * half / (3.0 * n) / r.h;
    EXPECT_NEAR(q.interior_mass, mass, 1e-7 * mass) << j;
  }
}

TEST(Quasimode, ExtremeEnergyIsTheDecayFactor) {
  const auto s = MakeScaled(2);
  const auto q = quasimodes::SolveQuasimode(s.omega, quasimodes::SpecFor(s.params, s.pairs, 2));
  const auto& r = s.params.record(2);
  const double closed = std::exp(-s.pairs.at(2)->decay_rate() * r.eps * r.h * r.r);
  EXPECT_NEAR(q.extreme_left, closed, 1e-9);
  EXPECT_NEAR(q.extreme_right, closed, 1e-9);
}

TEST(Gronwall, FlatRegionRatioAtMostOne) {
  const auto s = MakeScaled(3);
  const auto q = quasimodes::SolveQuasimode(s.omega, quasimodes::SpecFor(s.params, s.pairs, 3));
  const double x1 = q.x[q.Index(q.center + q.radius)];
  const auto g = quasimodes::EnergyGronwallCheck(q, s.omega, x1, q.x.back());
  EXPECT_LE(g.e_ratio, 1 + 1e-8);
  const auto inner = quasimodes::EnergyGronwallCheck(q, s.omega, q.x[q.Index(q.center)],
                                                     q.x[q.Index(q.center + q.radius / 2)]);
  if (inner.et_checked) EXPECT_LE(inner.et_ratio, 1 + 1e-8);
  EXPECT_LE(inner.e_ratio, 1 + 1e-8);
}

TEST(Sweep, RowsAndSlopes) {
  const auto s = MakeScaled(4);
  const auto sweep = quasimodes::BoundarySmallnessSweep(s.params, s.pairs, s.omega, {}, 2);
  ASSERT_EQ(sweep.truncated_at, 0);
  ASSERT_EQ(sweep.rows.size(), 3u);
  for (size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& row = sweep.rows[i];
    EXPECT_EQ(row.j, 2 + static_cast<int>(i));
    EXPECT_NEAR(row.extreme_energy, row.extreme_closed_form, 1e-9);
    if (i > 0) {
      const auto& prev = sweep.rows[i - 1];
      EXPECT_NEAR(row.slope0,
                  std::log(row.boundary0 / prev.boundary0) / std::log(row.h / prev.h), 1e-12);
    }
  }
  const auto csv = quasimodes::SweepCsv(sweep);
  EXPECT_EQ(csv.rfind("j,h,eps,", 0), 0u);
}

}  // namespace
}  // namespace roughwave
