#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "roughwave/coeff.h"
#include "roughwave/modulus.h"

namespace roughwave {
namespace {

constexpr double kPi = std::numbers::pi;

modulus::Classification Classify(const std::function<double(double)>& f) {
  const auto s = modulus::SampleFunction(f, 1 << 16);
  return modulus::ClassifyModulus(modulus::AnalyzeModulus(s), modulus::DyadicBlocks(s.values, 10));
}

TEST(Seminorms, LinearFunction) {
  const auto s = modulus::SampleFunction([](double x) { return 3 * x; }, 1024);
  const auto r = modulus::AnalyzeModulus(s);
  EXPECT_NEAR(r.lip_seminorm(), 3.0, 1e-12);
  EXPECT_NEAR(r.tv.value, 3.0, 1e-12);
  EXPECT_FALSE(r.tv.not_bv);
}

TEST(Seminorms, RejectsOffGridSteps) {
  const auto s = modulus::SampleFunction([](double x) { return x; }, 64);
  EXPECT_THROW(modulus::DifferenceSeminorm(s, modulus::Order::kFirst, modulus::Norm::kPointwise,
                                           {0.3}),
               std::invalid_argument);
  EXPECT_THROW(modulus::DifferenceSeminorm(s, modulus::Order::kFirst, modulus::Norm::kPointwise,
                                           {1.0 / 128}),
               std::invalid_argument);
}

TEST(Seminorms, SquareRootFirstDifference) {
  // |f(x + h) - f(x)| is largest at the cusp: sqrt(h) for |x - 1/2|^{1/2}.
  const auto s = modulus::SampleFunction([](double x) { return std::sqrt(std::abs(x - 0.5)); }, 4096);
  const auto e = modulus::DifferenceSeminorm(s, modulus::Order::kFirst, modulus::Norm::kPointwise,
                                             {1.0 / 64, 1.0 / 256});
  EXPECT_NEAR(e.plain_ratio[0], std::sqrt(1.0 / 64) * 64, 1e-9);
  EXPECT_NEAR(e.plain_ratio[1], std::sqrt(1.0 / 256) * 256, 1e-9);
}

TEST(TotalVariationLevels, BoundedVariationSaturates) {
  const auto s = modulus::SampleFunction([](double x) { return std::abs(x - 0.5); }, 1024);
  const auto tv = modulus::ComputeTotalVariation(s);
  EXPECT_NEAR(tv.value, 1.0, 1e-12);
  EXPECT_EQ(tv.longest_growth_run, 0);
}

TEST(Partition, ChiAndPhi) {
  EXPECT_DOUBLE_EQ(modulus::PartitionChi(0.0), 1.0);
  EXPECT_DOUBLE_EQ(modulus::PartitionChi(0.75), 1.0);
  EXPECT_DOUBLE_EQ(modulus::PartitionChi(4.0 / 3), 0.0);
  for (double xi : {0.9, 1.7, 5.0, 37.5, 200.0}) {
    double sum = modulus::PartitionChi(xi);
    for (int j = 0; j < 12; ++j) sum += modulus::PartitionPhi(std::ldexp(xi, -j));
    EXPECT_NEAR(sum, 1.0, 1e-14) << xi;
  }
}

TEST(DyadicBlocks, ReconstructBandLimitedSignal) {
  const int n = 1 << 12;
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = double(i) / n;
    f[i] = 0.3 + std::sin(2 * kPi * 3 * x) + 0.2 * std::cos(2 * kPi * 40 * x);
  }
  const auto spec = modulus::DyadicBlocks(f, 9);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& b : spec.blocks) sum += b[i];
    err = std::max(err, std::abs(sum - f[i]));
  }
  EXPECT_LT(err, 1e-10);
  EXPECT_THROW(modulus::DyadicBlocks(std::vector<double>(1000, 0.0), 3), std::invalid_argument);
}

// The term 2^-n cos(2 pi 2^n x) splits between blocks n and n - 1 with weights
// 1 - chi(1) and chi(1); both peak at x = 0, so 2^j |Delta_j W|_inf = 1 - chi(1) / 2.
TEST(DyadicBlocks, WeierstrassBlockSizes) {
  coeff::BaselineParams p;
  p.n_max = 16;
  const auto w = coeff::MakeBaseline("weierstrass", p);
  const auto s = modulus::SampleFunction([&w](double x) { return w(x); }, 1 << 16);
  const auto spec = modulus::DyadicBlocks(s.values, 10);
  const double expected = 1 - modulus::PartitionChi(1.0) / 2;
  for (size_t i = 0; i < spec.j.size(); ++i) {
    if (spec.j[i] < 3) continue;
    EXPECT_NEAR(std::ldexp(spec.norm_inf[i], spec.j[i]), expected, 1e-9) << spec.j[i];
  }
}

TEST(Classifier, ReferenceFamilies) {
  EXPECT_EQ(Classify([](double) { return 1.0; }).label, "Lipschitz/BV");
  EXPECT_EQ(Classify([](double x) { return std::abs(x - 0.5); }).label, "Lipschitz/BV");
  const auto root = Classify([](double x) { return std::sqrt(std::abs(x - 0.5)); });
  EXPECT_EQ(root.label, "Hoelder");
  EXPECT_NEAR(root.hoelder_exponent, 0.5, 0.05);
  coeff::BaselineParams p;
  p.n_max = 16;
  const auto w = coeff::MakeBaseline("weierstrass", p);
  const auto cw = Classify([&w](double x) { return w(x); });
  EXPECT_EQ(cw.label, "Zygmund");
  EXPECT_LT(cw.zyg_growth, modulus::kBoundedGrowth);
}

}  // namespace
}  // namespace roughwave
