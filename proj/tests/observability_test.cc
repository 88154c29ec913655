#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "roughwave/coeff.h"
#include "roughwave/observability.h"
#include "roughwave/sequences.h"

namespace roughwave {
namespace {

constexpr double kPi = std::numbers::pi;

coeff::Coefficient Constant(double v) {
  coeff::BaselineParams p;
  p.value = v;
  return coeff::MakeBaseline("constant", p);
}

TEST(Quotient, HalfForUnitDensityOverOnePeriod) {
  observability::QuotientOptions o;
  o.resolution = 1024;
  for (int k = 1; k <= 5; ++k) {
    const auto q = observability::ObservabilityQuotients(Constant(1.0),
                                                         observability::SineMode(1024, k), 2.0, 1, o);
    ASSERT_EQ(q.size(), 2u);
    EXPECT_NEAR(q[0].value, 0.5, 1e-3) << k;
    // d_t of k pi cos(k pi t) adds (k pi)^2 to the denominator.
    EXPECT_NEAR(q[1].value * k * k * kPi * kPi, 0.5, 2e-3) << k;
  }
  const auto mix = observability::RandomMixture(1024, 8, 7);
  EXPECT_NEAR(observability::ObservabilityQuotients(Constant(1.0), mix, 2.0, 0, o)[0].value, 0.5, 2e-3);
}

TEST(Quotient, RejectsZeroData) {
  observability::Datum zero{"zero", std::vector<double>(257, 0.0), std::vector<double>(257, 0.0)};
  observability::QuotientOptions o;
  o.resolution = 256;
  EXPECT_THROW(observability::ObservabilityQuotients(Constant(1.0), zero, 2.0, 0, o),
               std::invalid_argument);
}

TEST(Data, NormsAndDeterminism) {
  // Discrete gradient of sin(3 pi x): (2 / dx)^2 sin^2(3 pi dx / 2) / 2.
  const auto d = observability::SineMode(512, 3);
  const double dx = 1.0 / 512;
  EXPECT_NEAR(observability::InitialNorm(d), 2 / (dx * dx) * std::pow(std::sin(3 * kPi * dx / 2), 2),
              1e-9);
  const auto a = observability::RandomMixture(256, 8, 11), b = observability::RandomMixture(256, 8, 11);
  const auto c = observability::RandomMixture(256, 8, 12);
  EXPECT_EQ(a.u0, b.u0);
  EXPECT_EQ(a.u1, b.u1);
  EXPECT_NE(a.u0, c.u0);
  EXPECT_EQ(a.u0.front(), 0.0);
  EXPECT_EQ(a.u0.back(), 0.0);
}

// Over T = 2 the traces of distinct modes are orthogonal and each has Q = 1/2.
TEST(Gramian, UnitDensityPeriod) {
  observability::QuotientOptions o;
  o.resolution = 512;
  EXPECT_NEAR(observability::GramianConstant(Constant(1.0), 2.0, 8, 0, o), 0.5, 5e-3);
}

TEST(Ensemble, ConstantEstimateForUnitDensity) {
  observability::EnsembleSpec spec;
  spec.random_members = 4;
  observability::QuotientOptions o;
  o.resolution = 512;
  const auto est = observability::EstimateObservabilityConstant(Constant(1.0), 2.0, {8, 16}, spec, o, 2);
  ASSERT_EQ(est.size(), 2u);
  for (const auto& e : est) {
    EXPECT_NEAR(e.c_obs, 0.5, 5e-3);
    EXPECT_EQ(e.unbounded, 0);
    EXPECT_GT(e.members, 4);
  }
}

// Discrete eigenvector: -Delta_h sin(k pi x_i) = (4 / dx^2) sin^2(k pi dx / 2) sin(k pi x_i).
TEST(Control, NegativeNormOfEigenvector) {
  const int n = 128;
  const double dx = 1.0 / n;
  for (int k : {1, 5, 40}) {
    std::vector<double> q(n + 1);
    for (int i = 0; i <= n; ++i) q[i] = std::sin(k * kPi * i * dx);
    const double lambda = 4 / (dx * dx) * std::pow(std::sin(k * kPi * dx / 2), 2);
    EXPECT_NEAR(observability::NegativeNormSquared(q, dx), 0.5 / lambda, 1e-12 / lambda) << k;
  }
}

TEST(Control, TransposeIsExactAdjoint) {
  const auto omega = [] {
    coeff::BaselineParams p;
    p.base = 1.5;
    p.amplitude = 0.4;
    return coeff::MakeBaseline("smooth", p);
  }();
  const int n = 64;
  const double T = 2.0;
  const int L = observability::ControlLevels(omega, n, 0.9, T);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> f(L), s(2 * (n + 1));
  for (double& v : f) v = g(rng);
  for (double& v : s) v = g(rng);
  const auto Af = observability::ControlForward(omega, n, 0.9, T, f);
  const auto Ats = observability::ControlTranspose(omega, n, 0.9, T, s);
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    lhs += Af[i] * s[i];
    scale += std::abs(Af[i] * s[i]);
  }
  for (int l = 0; l < L; ++l) rhs += f[l] * Ats[l];
  EXPECT_NEAR(lhs, rhs, 1e-12 * scale);
}

TEST(Control, HumDrivesModeToRest) {
  const int n = 128;
  std::vector<double> y0(n + 1), y1(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) y0[i] = std::sin(kPi * i / n);
  observability::ControlOptions o;
  o.resolution = n;
  const auto r = observability::HumControl(Constant(1.0), y0, y1, 2.5, o);
  EXPECT_TRUE(r.controlled);
  EXPECT_LT(r.terminal_relative_energy, 1e-6);
  EXPECT_LE(r.iterations, 200);
  EXPECT_TRUE(r.admissible);
  // Residuals never increase in CG on the normal equations of a consistent system.
  EXPECT_LT(r.residual_history.back(), r.residual_history.front());
  EXPECT_GT(r.cost, 0.0);
}

TEST(Control, ValidatesArguments) {
  std::vector<double> y(100, 0.0);
  EXPECT_THROW(observability::HumControl(Constant(1.0), y, y, 2.5), std::invalid_argument);
}

TEST(Divergence, TableShapeAndCsvHeader) {
  auto params = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, 3, coeff::SequenceMode::kScaled,
                                     coeff::ReferenceM());
  const auto pairs = coeff::BuildPairs(params);
  const auto omega = coeff::MakeCounterexampleDensity(params, pairs);
  observability::SweepOptions so;
  so.m_list = {0, 1};
  const auto table = observability::RunCounterexampleSweep(params, pairs, omega, so);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.truncated_at, 0);
  for (const auto& r : table.rows) {
    ASSERT_EQ(r.Q.size(), 2u);
    EXPECT_GT(r.Q[0], r.Q[1]);
    EXPECT_GT(r.numerator, 0.0);
    EXPECT_LT(r.boundary_residual, 1e-12);
  }
  const auto csv = observability::DivergenceCsv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "j,h,Q_0,Q_1,numerator,denominator_0,denominator_1,boundary_smallness");
}

}  // namespace
}  // namespace roughwave
