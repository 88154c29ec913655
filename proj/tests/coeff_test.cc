#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "roughwave/coeff.h"
#include "roughwave/oscillator.h"
#include "roughwave/sequences.h"

namespace roughwave {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4 * kPi * kPi;

// tests/oracles/oracle_coeff.py, 30-digit mpmath with the default cutoff.
constexpr double kOracleC = 0.162809588718991904904;
struct GammaOracle {
  double eps, gamma, M;
};
constexpr GammaOracle kGamma[] = {
    {0.04, 0.0178631963439224822, 24.820868174421523},
    {0.02, 0.0178891973589120956, 24.836000361513438},
    {0.01, 0.0179022169691379651, 24.84356960794866},
};
struct AlphaOracle {
  double y, alpha;
};
constexpr AlphaOracle kAlpha[] = {
    {0.1, 39.6840385595267705}, {0.3, 39.7738561074325325}, {0.37, 39.9662794071955770},
    {1.3, 39.7738561074325325}, {2.45, 39.1275595270465975},
};

TEST(PeriodicPair, MatchesHighPrecisionOracle) {
  for (const auto& o : kGamma) {
    const auto pair = coeff::PeriodicPair::Build(o.eps);
    EXPECT_NEAR(pair.decay_rate(), kOracleC, 1e-10) << o.eps;
    EXPECT_NEAR(pair.gamma(), o.gamma, 1e-9) << o.eps;
    EXPECT_NEAR(pair.M(), o.M, 1e-3 * o.M) << o.eps;
    EXPECT_LT(pair.max_residual(), 1e-8);
  }
  const auto pair = coeff::PeriodicPair::Build(0.02);
  for (const auto& o : kAlpha) EXPECT_NEAR(pair.alpha(o.y), o.alpha, 1e-9) << o.y;
}

TEST(PeriodicPair, FlatNearIntegersAndExponentialDecay) {
  const auto pair = coeff::PeriodicPair::Build(0.02);
  for (double y : {0.0, 0.01, 0.99, 1.0, 3.02, -2.0}) EXPECT_DOUBLE_EQ(pair.alpha(y), kFourPiSq);
  EXPECT_DOUBLE_EQ(pair.w(0.0), 1.0);
  for (int n = 1; n <= 20; ++n) {
    EXPECT_NEAR(pair.w(n), std::exp(-pair.decay_rate() * 0.02 * n), 1e-13);
    EXPECT_NEAR(pair.dw(n), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(pair.w(-n), pair.w(n));
  }
}

TEST(PeriodicPair, RejectsBadEpsilon) {
  EXPECT_THROW(coeff::PeriodicPair::Build(0.0), std::invalid_argument);
  EXPECT_THROW(coeff::PeriodicPair::Build(-0.1), std::invalid_argument);
}

TEST(Baseline, ClosedFormValues) {
  coeff::BaselineParams p;
  p.value = 3.0;
  EXPECT_DOUBLE_EQ(coeff::MakeBaseline("constant", p)(0.3), 3.0);

  p = {};
  const auto w = coeff::MakeBaseline("weierstrass", p);
  // base + amplitude * sum 2^-n at x = 0.
  EXPECT_NEAR(w(0.0), 2.0 + (1.0 - std::ldexp(1.0, -16)), 1e-14);
  // Only the n = 1 term changes sign at x = 1/4.
  EXPECT_NEAR(w(0.25), 2.0 - 0.5 + (0.5 - std::ldexp(1.0, -16)), 1e-14);

  p = {};
  p.exponent = 0.5;
  const auto h = coeff::MakeBaseline("hoelder", p);
  EXPECT_DOUBLE_EQ(h(0.5), 2.0);
  EXPECT_NEAR(h(0.75), 2.5, 1e-15);
  EXPECT_THROW(coeff::MakeBaseline("no-such-family", p), std::invalid_argument);
}

TEST(Coefficient, HyperbolicityCheck) {
  const coeff::Coefficient bad(coeff::Kind::kCustom, [](double x) { return x < 0.7 ? 1.5 : 3.0; },
                               1.0, 2.0, nlohmann::json::object());
  EXPECT_THROW(bad.CheckHyperbolicity(), std::domain_error);
  const coeff::Coefficient good(coeff::Kind::kCustom, [](double) { return 1.5; }, 1.0, 2.0,
                                nlohmann::json::object());
  EXPECT_NO_THROW(good.CheckHyperbolicity());
}

TEST(TravelTime, ConstantAndSimpsonReference) {
  coeff::BaselineParams p;
  p.value = 4.0;
  EXPECT_NEAR(coeff::ComputeTravelTime(coeff::MakeBaseline("constant", p)).value, 2.0, 1e-12);

  p = {};
  p.base = 1.5;
  p.amplitude = 0.5;
  p.frequency = 2.0;
  const auto s = coeff::MakeBaseline("smooth", p);
  const int n = 200000;
  double ref = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wgt = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    ref += wgt * std::sqrt(s(double(i) / n));
  }
  ref /= 3.0 * n;
  EXPECT_NEAR(coeff::ComputeTravelTime(s).value, ref, 1e-10);
}

TEST(NormalForm, PreservesTravelTime) {
  coeff::BaselineParams p;
  p.base = 1.5;
  p.amplitude = 0.3;
  const auto rho = coeff::MakeBaseline("smooth", p);
  p.base = 2.0;
  p.phase = 1.0;
  const auto a = coeff::MakeBaseline("smooth", p);
  const auto nf = coeff::ReduceToNormalForm(rho, a);
  EXPECT_NEAR(nf.travel_time_original, nf.travel_time_reduced, 1e-8);
  EXPECT_GT(nf.length, 0.0);
}

TEST(Descriptor, RoundTripsThroughJson) {
  coeff::BaselineParams p;
  p.exponent = 0.3;
  const auto h = coeff::MakeBaseline("hoelder", p);
  const auto back = coeff::FromJson(coeff::ToJson(h));
  for (double x : {0.0, 0.2, 0.5, 0.77, 1.0}) EXPECT_DOUBLE_EQ(back(x), h(x));

  const auto ce = coeff::MakeScaledCounterexample(2, 4);
  const auto ce_back = coeff::FromJson(coeff::ToJson(ce));
  for (double x : {0.1, 0.19, 0.3, 0.4, 0.9}) EXPECT_DOUBLE_EQ(ce_back(x), ce(x));
}

TEST(Sequences, DyadicPartition) {
  const auto p = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, 8, coeff::SequenceMode::kScaled,
                                      coeff::ReferenceM());
  EXPECT_DOUBLE_EQ(p.record(3).r, 0.125);
  EXPECT_DOUBLE_EQ(p.record(3).m, 3.0 / 16);
  // Adjacent intervals share endpoints and I_2 ends at 1/2.
  EXPECT_DOUBLE_EQ(p.record(2).m + p.record(2).r / 2, 0.5);
  for (int j = 3; j <= 8; ++j) {
    EXPECT_DOUBLE_EQ(p.record(j).m + p.record(j).r / 2, p.record(j - 1).m - p.record(j - 1).r / 2);
    // h_j = 2^{j+4} against r_j = 2^-j: every scaled interval holds 16 periods.
    EXPECT_EQ(p.record(j).n, 16);
    EXPECT_DOUBLE_EQ(p.record(j).h * p.record(j).r, double(p.record(j).n));
  }
}

TEST(Sequences, ScaledDefiningRelation) {
  const auto p = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, 6, coeff::SequenceMode::kScaled,
                                      coeff::ReferenceM());
  EXPECT_DOUBLE_EQ(p.record(2).h, 64.0);
  EXPECT_NEAR(p.record(2).eps, std::pow(std::log(64.0), 2) / 64, 1e-15);
  for (const auto& r : p.records) {
    EXPECT_NEAR(r.eps * r.h, std::log(r.h) * std::log(r.h), 1e-12 * r.eps * r.h);
  }
}

TEST(Sequences, StrictScalesAndFlags) {
  const double M = coeff::ReferenceM();
  const auto strict8 = coeff::MakeSequences(coeff::PsiIdentity(), 8, 2, 6,
                                            coeff::SequenceMode::kPaperStrict, M);
  for (const auto& r : strict8.records) {
    // log h_j = [2^{8j}] + 1 before the even-n adjustment, which moves it by far less than 1.
    const double target = std::ldexp(1.0, 8 * r.j) + 1;
    EXPECT_NEAR(r.log_h, target, 1e-6 * target) << r.j;
    EXPECT_TRUE(std::isfinite(r.log_eps));
  }
  for (const auto& f : strict8.flags) EXPECT_TRUE(f.all()) << f.j;

  const auto strict2 = coeff::MakeSequences(coeff::PsiIdentity(), 2, 2, 6,
                                            coeff::SequenceMode::kPaperStrict, M);
  bool any_head_fails = false;
  for (const auto& f : strict2.flags) any_head_fails = any_head_fails || !f.head;
  EXPECT_TRUE(any_head_fails);
}

TEST(CounterexampleDensity, PiecewiseStructure) {
  auto params = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, 4, coeff::SequenceMode::kScaled,
                                     coeff::ReferenceM());
  const auto pairs = coeff::BuildPairs(params);
  const auto omega = coeff::MakeCounterexampleDensity(params, pairs);
  for (double x : {0.5, 0.6, 0.8, 1.0}) EXPECT_DOUBLE_EQ(omega(x), kFourPiSq);
  for (const auto& r : params.records) {
    EXPECT_DOUBLE_EQ(omega(r.m), kFourPiSq) << r.j;
    const double x = r.m + 0.137 * r.r;
    EXPECT_NEAR(omega(x), pairs.at(r.j)->alpha(r.h * (x - r.m)), 1e-12) << r.j;
  }
}

}  // namespace
}  // namespace roughwave
