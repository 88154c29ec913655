#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughwave/coeff.h"
#include "roughwave/oscillator.h"

namespace roughwave {
namespace coeff {

/// A modulus profile g with the defining relation eps_j h_j = log h_j g(log h_j).
/// For psi descriptors g = psi; for lambda descriptors g(s) = lambda(e^-s), so
/// both share one code path in the logarithmic variable.
struct ModulusDescriptor {
  enum class Type { kPsi, kLambda };
  Type type = Type::kPsi;
  std::string name;
  std::function<double(double)> profile;
  std::function<double(double)> inverse;
};

/// psi(s) = s.
ModulusDescriptor PsiIdentity();
/// psi(s) = s^p, 0 < p < 1.
ModulusDescriptor PsiPower(double p);
/// Piecewise-linear psi through (s_i, psi_i); throws std::invalid_argument
/// unless the table is strictly increasing with psi(1) = 1.
ModulusDescriptor PsiTable(std::vector<double> s, std::vector<double> psi);
/// lambda(r) = 1 + log(1 + log(1/r)) on ]0, 1].
ModulusDescriptor LambdaLogLog();
ModulusDescriptor DescriptorFromName(const std::string& name);

enum class SequenceMode { kPaperStrict, kScaled };

std::string ToString(SequenceMode mode);
SequenceMode SequenceModeFromString(const std::string& name);

struct SequenceRecord {
  int j = 0;
  double r = 0.0;
  double m = 0.0;
  /// h_j and eps_j as doubles; in paper-strict mode h may be +inf and eps 0
  /// once they leave double range. log_h and log_eps are always finite.
  double h = 0.0;
  double eps = 0.0;
  double log_h = 0.0;
  double log_eps = 0.0;
  /// n_j = h_j r_j. log_n is kept for paper-strict values beyond 2^63.
  long long n = 0;
  double log_n = 0.0;
};

/// The three inequalities fixing N, evaluated for one j.
struct CondNFlags {
  int j = 0;
  bool eps_small = false;  // eps_j <= 1/(2M)
  bool tail = false;       // 5M sum_{k>j} eps_k r_k <= eps_j r_j
  bool head = false;       // 5M sum_{k<j} eps_k h_k r_k <= eps_j h_j r_j
  /// log(lhs / rhs) for each inequality; <= 0 means satisfied.
  double log_margin_eps = 0.0;
  double log_margin_tail = 0.0;
  double log_margin_head = 0.0;
  bool all() const { return eps_small && tail && head; }
};

struct CounterexampleParams {
  SequenceMode mode = SequenceMode::kScaled;
  ModulusDescriptor descriptor;
  int N = 1;
  int j_lo = 2;
  int j_hi = 6;
  int j0 = 4;
  double M = 0.0;
  std::vector<SequenceRecord> records;
  std::vector<CondNFlags> flags;

  const SequenceRecord& record(int j) const;
};

/// Paper-strict: log h_j = [g^-1(2^{Nj})] + 1, then h_j rounded up so that
/// n_j is an even integer, all in 50-digit binary floating point.
/// Scaled: h_j = 2^{j + j0}. In both modes eps_j solves the defining relation.
/// M is the oscillator constant entering the cond-N flags.
CounterexampleParams MakeSequences(const ModulusDescriptor& descriptor, int N,
                                   int j_lo, int j_hi, SequenceMode mode,
                                   double M, int j0 = 4);

nlohmann::json ToJson(const CounterexampleParams& params);

using PairMap = std::map<int, std::shared_ptr<const PeriodicPair>>;

/// Builds one oscillator pair per j with the sequence's eps_j. eps_bar is
/// raised to cover the largest eps_j; the density bound check still applies.
PairMap BuildPairs(const CounterexampleParams& params, const Cutoff& cutoff = {});

/// omega = alpha_{eps_j}(h_j (x - m_j)) on I_j and 4 pi^2 elsewhere.
/// Requires n_j even so that both endpoints of I_j map to integers.
Coefficient MakeCounterexampleDensity(const CounterexampleParams& params,
                                      const PairMap& pairs);

/// One density per j, each with the single active interval I_j.
std::vector<Coefficient> MakeLambdaDensities(const CounterexampleParams& params,
                                             const PairMap& pairs);

/// Scaled psi = id counterexample with default cutoff, the workhorse of the
/// experiments.
Coefficient MakeScaledCounterexample(int j_lo = 2, int j_hi = 6, int j0 = 4,
                                     const Cutoff& cutoff = {});

/// Measured M for the default cutoff at eps = 0.02.
double ReferenceM(const Cutoff& cutoff = {});

}  // namespace coeff
}  // namespace roughwave
