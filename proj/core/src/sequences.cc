#include "roughwave/sequences.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "roughwave/errors.h"

namespace roughwave {
namespace coeff {
namespace {

using Ext = boost::multiprecision::cpp_bin_float_50;

constexpr double kPi = std::numbers::pi;
constexpr int kTailTerms = 64;

struct ExtRecord {
  Ext log_h;
  Ext log_eps;
};

Ext LogSumExp(const std::vector<Ext>& logs) {
  if (logs.empty()) return -std::numeric_limits<Ext>::infinity();
  const Ext top = *std::max_element(logs.begin(), logs.end());
  Ext s = 0;
  for (const Ext& l : logs) s += exp(l - top);
  return top + log(s);
}

ExtRecord RecordFor(const ModulusDescriptor& d, int N, int k,
                    SequenceMode mode, int j0) {
  const Ext ln2 = log(Ext(2));
  ExtRecord out;
  if (mode == SequenceMode::kScaled) {
    out.log_h = (k + j0) * ln2;
  } else {
    const double target = std::ldexp(1.0, N * k);
    const double inv = d.inverse(target);
    if (!std::isfinite(inv)) {
      throw ScaleOutOfReach("sequences: g^-1(2^{Nj}) is not representable");
    }
    const Ext L = floor(Ext(inv)) + 1;
    // Round h up to a multiple of 2^{k+1} so that n = h r is even.
    if (L < 1e6) {
      const Ext grain = pow(Ext(2), k + 1);
      const Ext h = ceil(exp(L) / grain) * grain;
      out.log_h = log(h);
    } else {
      out.log_h = L;
    }
  }
  const double lh = static_cast<double>(out.log_h);
  out.log_eps = log(out.log_h) + log(Ext(d.profile(lh))) - out.log_h;
  return out;
}

}  // namespace

ModulusDescriptor PsiIdentity() {
  return {ModulusDescriptor::Type::kPsi, "psi:identity",
          [](double s) { return s; }, [](double t) { return t; }};
}

ModulusDescriptor PsiPower(double p) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("psi power outside ]0,1[");
  return {ModulusDescriptor::Type::kPsi, "psi:power:" + std::to_string(p),
          [p](double s) { return std::pow(s, p); },
          [p](double t) { return std::pow(t, 1.0 / p); }};
}

ModulusDescriptor PsiTable(std::vector<double> s, std::vector<double> psi) {
  if (s.size() != psi.size() || s.size() < 2) {
    throw std::invalid_argument("psi table: need matching columns");
  }
  for (size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1]) || !(psi[i] > psi[i - 1])) {
      throw std::invalid_argument("psi table: not strictly increasing");
    }
  }
  auto interp = [](const std::vector<double>& xs, const std::vector<double>& ys,
                   double x) {
    size_t i = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    i = std::clamp<size_t>(i, 1, xs.size() - 1);
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
  };
  if (s.front() > 1 || s.back() < 1 || std::abs(interp(s, psi, 1.0) - 1) > 1e-12) {
    throw std::invalid_argument("psi table: psi(1) must equal 1");
  }
  return {ModulusDescriptor::Type::kPsi, "psi:table",
          [=](double x) { return interp(s, psi, x); },
          [=](double y) { return interp(psi, s, y); }};
}

ModulusDescriptor LambdaLogLog() {
  return {ModulusDescriptor::Type::kLambda, "lambda:loglog",
          [](double s) { return 1 + std::log1p(s); },
          [](double t) { return std::expm1(t - 1); }};
}

ModulusDescriptor DescriptorFromName(const std::string& name) {
  if (name == "psi:identity" || name == "identity") return PsiIdentity();
  if (name == "lambda:loglog") return LambdaLogLog();
  const std::string power = "psi:power:";
  if (name.rfind(power, 0) == 0) return PsiPower(std::stod(name.substr(power.size())));
  throw std::invalid_argument("unknown modulus descriptor: " + name);
}

std::string ToString(SequenceMode mode) {
  return mode == SequenceMode::kScaled ? "scaled" : "paper-strict";
}

SequenceMode SequenceModeFromString(const std::string& name) {
  if (name == "scaled") return SequenceMode::kScaled;
  if (name == "paper-strict" || name == "strict") return SequenceMode::kPaperStrict;
  throw std::invalid_argument("unknown sequence mode: " + name);
}

const SequenceRecord& CounterexampleParams::record(int j) const {
  for (const auto& r : records) {
    if (r.j == j) return r;
  }
  throw std::out_of_range("no sequence record for j = " + std::to_string(j));
}

CounterexampleParams MakeSequences(const ModulusDescriptor& descriptor, int N,
                                   int j_lo, int j_hi, SequenceMode mode,
                                   double M, int j0) {
  if (!descriptor.profile || !descriptor.inverse) {
    throw std::invalid_argument("sequences: descriptor lacks profile/inverse");
  }
  if (N < 1 || j_lo < 2 || j_hi < j_lo) {
    throw std::invalid_argument("sequences: need N >= 1 and 2 <= j_lo <= j_hi");
  }
  if (mode == SequenceMode::kScaled && j0 < 1) {
    throw std::invalid_argument("sequences: scaled mode needs j0 >= 1");
  }
  if (!(M > 0)) throw std::invalid_argument("sequences: M must be positive");
  if (std::abs(descriptor.profile(descriptor.type == ModulusDescriptor::Type::kPsi
                                      ? 1.0 : 0.0) - 1.0) > 1e-12) {
    throw std::invalid_argument("sequences: descriptor not normalized");
  }

  CounterexampleParams p;
  p.mode = mode;
  p.descriptor = descriptor;
  p.N = N;
  p.j_lo = j_lo;
  p.j_hi = j_hi;
  p.j0 = j0;
  p.M = M;

  const Ext ln2 = log(Ext(2));
  std::map<int, ExtRecord> ext;
  for (int k = 1; k <= j_hi + kTailTerms; ++k) {
    if (k > j_hi && mode == SequenceMode::kPaperStrict && N * k > 1000) break;
    ext[k] = RecordFor(descriptor, N, k, mode, j0);
  }

  for (int j = j_lo; j <= j_hi; ++j) {
    const ExtRecord& e = ext.at(j);
    SequenceRecord r;
    r.j = j;
    r.r = std::ldexp(1.0, -j);
    r.m = 3 * std::ldexp(1.0, -(j + 1));
    r.log_h = static_cast<double>(e.log_h);
    r.log_eps = static_cast<double>(e.log_eps);
    r.h = std::exp(r.log_h);
    r.eps = std::exp(r.log_eps);
    r.log_n = static_cast<double>(e.log_h - j * ln2);
    if (mode == SequenceMode::kScaled) {
      r.h = std::ldexp(1.0, j + j0);
      r.n = 1LL << j0;
      r.eps = r.log_h * descriptor.profile(r.log_h) / r.h;
    } else if (r.log_n < 62 * std::log(2.0)) {
      r.n = std::llround(static_cast<double>(exp(e.log_h - j * ln2)));
    }
    p.records.push_back(r);

    CondNFlags f;
    f.j = j;
    const Ext log_bound = -log(Ext(2) * M);
    f.log_margin_eps = static_cast<double>(e.log_eps - log_bound);
    std::vector<Ext> tail, head;
    for (const auto& [k, ek] : ext) {
      if (k > j) tail.push_back(ek.log_eps - k * ln2);
      if (k < j) head.push_back(ek.log_eps + ek.log_h - k * ln2);
    }
    const Ext log5M = log(Ext(5) * M);
    f.log_margin_tail = static_cast<double>(log5M + LogSumExp(tail) -
                                            (e.log_eps - j * ln2));
    f.log_margin_head = head.empty()
        ? -std::numeric_limits<double>::infinity()
        : static_cast<double>(log5M + LogSumExp(head) -
                              (e.log_eps + e.log_h - j * ln2));
    f.eps_small = f.log_margin_eps <= 0;
    f.tail = f.log_margin_tail <= 0;
    f.head = f.log_margin_head <= 0;
    p.flags.push_back(f);
  }
  return p;
}

nlohmann::json ToJson(const CounterexampleParams& p) {
  nlohmann::json j;
  j["mode"] = ToString(p.mode);
  j["descriptor"] = p.descriptor.name;
  j["N"] = p.N;
  j["j_lo"] = p.j_lo;
  j["j_hi"] = p.j_hi;
  j["j0"] = p.j0;
  j["M"] = p.M;
  for (const auto& r : p.records) {
    j["records"].push_back({{"j", r.j}, {"r", r.r}, {"m", r.m}, {"h", r.h},
                            {"eps", r.eps}, {"log_h", r.log_h},
                            {"log_eps", r.log_eps}, {"n", r.n},
                            {"log_n", r.log_n}});
  }
  for (const auto& f : p.flags) {
    j["cond_N"].push_back({{"j", f.j}, {"eps_small", f.eps_small},
                           {"tail", f.tail}, {"head", f.head},
                           {"log_margin_eps", f.log_margin_eps},
                           {"log_margin_tail", f.log_margin_tail},
                           {"log_margin_head", f.log_margin_head}});
  }
  return j;
}

PairMap BuildPairs(const CounterexampleParams& params, const Cutoff& cutoff) {
  PeriodicPair::Options options;
  for (const auto& r : params.records) {
    options.eps_bar = std::max(options.eps_bar, 1.01 * r.eps);
  }
  PairMap pairs;
  for (const auto& r : params.records) {
    if (!(r.eps > 0)) {
      throw ScaleOutOfReach("pairs: eps_j underflows double precision");
    }
    pairs[r.j] = std::make_shared<const PeriodicPair>(
        PeriodicPair::Build(r.eps, cutoff, options));
  }
  return pairs;
}

namespace {

struct Active {
  int j;
  double m;
  double h;
  std::shared_ptr<const PeriodicPair> pair;
};

// Index j with x in I_j = ]2^-j, 2^{1-j}], or 0 when x is outside ]0, 1/2].
int IntervalIndex(double x) {
  if (!(x > 0) || x > 0.5) return 0;
  int e = 0;
  const double mant = std::frexp(x, &e);
  return mant == 0.5 ? 2 - e : 1 - e;
}

Coefficient BuildDensity(const CounterexampleParams& params,
                         const PairMap& pairs, int only_j, Kind kind) {
  std::vector<Active> active;
  std::vector<double> breaks;
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : params.records) {
    if (only_j != 0 && r.j != only_j) continue;
    if (!std::isfinite(r.h) || r.n <= 0 || r.h > 1e9) {
      throw ScaleOutOfReach("density: h_j beyond sampled range");
    }
    if (r.n % 2 != 0) {
      throw std::invalid_argument("density: n_j must be an even integer");
    }
    auto it = pairs.find(r.j);
    if (it == pairs.end() || std::abs(it->second->eps() - r.eps) > 1e-15 * r.eps) {
      throw std::invalid_argument("density: missing or mismatched pair for j");
    }
    active.push_back({r.j, r.m, r.h, it->second});
    for (long long k = -r.n / 2; k <= r.n / 2; ++k) {
      breaks.push_back(r.m + static_cast<double>(k) / r.h);
    }
    records.push_back({{"j", r.j}, {"m", r.m}, {"h", r.h}, {"eps", r.eps},
                       {"n", r.n}, {"M", it->second->M()},
                       {"c", it->second->decay_rate()},
                       {"gamma", it->second->gamma()}});
  }
  std::sort(breaks.begin(), breaks.end());
  const int j_min = active.empty() ? 0 : active.front().j;
  auto eval = [active, j_min](double x) {
    const int j = IntervalIndex(x);
    if (j >= j_min && j < j_min + static_cast<int>(active.size())) {
      const Active& a = active[j - j_min];
      return a.pair->alpha(a.h * (x - a.m));
    }
    return 4 * kPi * kPi;
  };
  nlohmann::json prov;
  prov["family"] = "counterexample";
  prov["sequence"] = ToJson(params);
  prov["cutoff"] = ToJson(active.empty() ? Cutoff{} : active.front().pair->cutoff());
  prov["records"] = records;
  if (only_j != 0) prov["only_j"] = only_j;
  Coefficient omega(kind, eval, 2 * kPi * kPi, 8 * kPi * kPi, prov, 1.0, breaks);
  omega.CheckHyperbolicity();
  return omega;
}

}  // namespace

Coefficient MakeCounterexampleDensity(const CounterexampleParams& params,
                                      const PairMap& pairs) {
  return BuildDensity(params, pairs, 0, Kind::kCounterexamplePsi);
}

std::vector<Coefficient> MakeLambdaDensities(const CounterexampleParams& params,
                                             const PairMap& pairs) {
  std::vector<Coefficient> out;
  for (const auto& r : params.records) {
    out.push_back(BuildDensity(params, pairs, r.j, Kind::kCounterexampleLambda));
  }
  return out;
}

double ReferenceM(const Cutoff& cutoff) {
  return PeriodicPair::Build(0.02, cutoff).M();
}

Coefficient MakeScaledCounterexample(int j_lo, int j_hi, int j0,
                                     const Cutoff& cutoff) {
  const auto params = MakeSequences(PsiIdentity(), 1, j_lo, j_hi,
                                    SequenceMode::kScaled, ReferenceM(cutoff), j0);
  return MakeCounterexampleDensity(params, BuildPairs(params, cutoff));
}

}  // namespace coeff
}  // namespace roughwave
