#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace roughwave {
namespace modulus {

/// Values at x_i = i / (size - 1), i = 0 .. size - 1, on [0, 1].
struct Samples {
  std::vector<double> values;
  double step() const { return 1.0 / (values.size() - 1); }
  int intervals() const { return static_cast<int>(values.size()) - 1; }
};

Samples SampleFunction(const std::function<double(double)>& f, int intervals);

enum class Order { kFirst, kSecond };
enum class Norm { kPointwise, kIntegral };

/// Ratios of a difference modulus against h and against h log(1 + 1/h),
/// one entry per h of the grid; the seminorm is the supremum.
struct SeminormEntry {
  std::vector<double> h;
  std::vector<double> plain_ratio;
  std::vector<double> log_ratio;
  double plain = 0.0;
  double log = 0.0;
};

/// Dyadic h = 2^-k, k = 2 .. log2(intervals) - 2.
std::vector<double> DefaultHGrid(int intervals);

/// Pointwise second differences reflect evenly at both ends. Integral
/// versions integrate |f(x+h) - f(x)| over [0, 1-h] and
/// |f(x+h) + f(x-h) - 2f(x)| over [h, 1-h] by the trapezoid rule.
/// Throws std::invalid_argument for h below two sample spacings or off-grid.
SeminormEntry DifferenceSeminorm(const Samples& f, Order order, Norm norm,
                                 const std::vector<double>& h_grid);

struct TotalVariation {
  double value = 0.0;
  /// TV of the subsample with 2^k intervals, k = 2 .. log2(intervals).
  std::vector<int> levels;
  std::vector<double> level_values;
  std::vector<double> growth;
  /// Longest run of consecutive refinements with growth >= 1.5.
  int longest_growth_run = 0;
  bool not_bv = false;
};

TotalVariation ComputeTotalVariation(const Samples& f);

struct ModulusReport {
  SeminormEntry lip;
  SeminormEntry zyg;
  SeminormEntry ll_integral;
  SeminormEntry z_integral;
  TotalVariation tv;
  double lip_seminorm() const { return lip.plain; }
  double ll_pointwise() const { return lip.log; }
  double z_pointwise() const { return zyg.plain; }
  double lz_pointwise() const { return zyg.log; }
  double ll_integral_seminorm() const { return ll_integral.log; }
  double z_integral_seminorm() const { return z_integral.plain; }
  double lz_integral_seminorm() const { return z_integral.log; }
};

ModulusReport AnalyzeModulus(const Samples& f,
                             const std::vector<double>& h_grid = {});

enum class Extension { kPeriodic, kEven };

struct DyadicSpectrum {
  std::vector<int> j;
  std::vector<double> norm1;
  std::vector<double> norm2;
  std::vector<double> norm_inf;
  /// Block samples, aligned with j.
  std::vector<std::vector<double>> blocks;
  double besov_1_inf_inf = 0.0;
  double besov_1_1_inf = 0.0;
  double besov_1_2_inf = 0.0;
  double besov_1log_inf_inf = 0.0;
};

/// The partition function chi: 1 on |xi| <= 3/4, 0 on |xi| >= 4/3.
double PartitionChi(double xi);
/// phi(xi) = chi(xi / 2) - chi(xi).
double PartitionPhi(double xi);

/// Littlewood-Paley blocks Delta_{-1} .. Delta_{j_max} with frequency
/// measured in cycles per unit length. Periodic extension uses the first
/// 2^p samples (x = 1 is the period image of x = 0); even extension mirrors
/// all samples. Throws std::invalid_argument for non-power-of-two sample
/// counts or j_max > log2(length) - 2.
DyadicSpectrum DyadicBlocks(const std::vector<double>& values, int j_max,
                            Extension extension = Extension::kPeriodic);

/// Growth exponent in log log(1/h) below which a difference ratio counts as bounded.
inline constexpr double kBoundedGrowth = 0.35;

struct Classification {
  std::string label;
  double hoelder_exponent = 1.0;
  /// Growth exponents of the first/second difference ratios in log(1/h).
  double lip_growth = 0.0;
  double zyg_growth = 0.0;
  double power_residual = 0.0;
  double log_residual = 0.0;
  bool inconclusive = false;
};

/// Labels: "Lipschitz/BV", "Zygmund", "log-Lipschitz", "log-Zygmund",
/// "Hoelder", "below-log-Lipschitz" or "inconclusive".
Classification ClassifyModulus(const ModulusReport& report,
                               const DyadicSpectrum& spectrum);

nlohmann::json ToJson(const ModulusReport& report);
nlohmann::json ToJson(const Classification& c);
std::string SpectrumCsv(const DyadicSpectrum& spectrum);

}  // namespace modulus
}  // namespace roughwave
