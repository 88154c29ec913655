#include "acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "roughwave/coeff.h"
#include "roughwave/modulus.h"
#include "roughwave/observability.h"
#include "roughwave/oscillator.h"
#include "roughwave/quasimodes.h"
#include "roughwave/sequences.h"
#include "roughwave/wavesim.h"

namespace roughwave {
namespace acceptance {
namespace {

constexpr double kPi = std::numbers::pi;

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string Join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + Fmt(v[i]);
  return s;
}

Check Below(const std::string& name, double value, double limit) {
  return {name, value < limit, Fmt(value), "< " + Fmt(limit)};
}

Check AtMost(const std::string& name, double value, double limit) {
  return {name, value <= limit, Fmt(value), "<= " + Fmt(limit)};
}

Check AtLeast(const std::string& name, double value, double limit) {
  return {name, value >= limit, Fmt(value), ">= " + Fmt(limit)};
}

double Spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / std::abs(*lo);
}

double MaxOverMin(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

coeff::Coefficient Constant(double value) {
  coeff::BaselineParams p;
  p.value = value;
  return coeff::MakeBaseline("constant", p);
}

coeff::Coefficient Smooth(double base, double amplitude, double frequency, double phase) {
  coeff::BaselineParams p;
  p.base = base;
  p.amplitude = amplitude;
  p.frequency = frequency;
  p.phase = phase;
  return coeff::MakeBaseline("smooth", p);
}

coeff::Coefficient Weierstrass() {
  coeff::BaselineParams p;
  p.n_max = 16;
  return coeff::MakeBaseline("weierstrass", p);
}

struct Counterexample {
  coeff::CounterexampleParams params;
  coeff::PairMap pairs;
  coeff::Coefficient omega;
};

Counterexample ScaledCounterexample(int j_hi) {
  auto params = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, j_hi,
                                     coeff::SequenceMode::kScaled, coeff::ReferenceM(), 4);
  auto pairs = coeff::BuildPairs(params);
  auto omega = coeff::MakeCounterexampleDensity(params, pairs);
  return {std::move(params), std::move(pairs), std::move(omega)};
}

double TwoTravelTimesPlus(const coeff::Coefficient& omega) {
  return 2 * coeff::ComputeTravelTime(omega).value + 0.5;
}

// 1: int_0^2 |u_x(t, 0)|^2 = 4 E(0) and Q = 1/2 for omega = 1.
void BoundaryIdentity(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  const int n = o.reduced ? 1024 : 2048;
  const auto one = Constant(1.0);
  std::vector<observability::Datum> data;
  for (int k = 1; k <= 8; ++k) data.push_back(observability::SineMode(n, k));
  for (std::uint64_t s = 1; s <= 4; ++s) data.push_back(observability::RandomMixture(n, 8, s));
  observability::QuotientOptions qo;
  qo.resolution = n;
  double worst_identity = 0.0, worst_quotient = 0.0;
  for (const auto& d : data) {
    const auto q = observability::ObservabilityQuotients(one, d, 2.0, 0, qo)[0];
    const double energy = 0.5 * observability::EnergyNorm(d, one);
    worst_identity = std::max(worst_identity, std::abs(q.denominator - 4 * energy) / (4 * energy));
    worst_quotient = std::max(worst_quotient, std::abs(q.value - 0.5) / 0.5);
  }
  r.checks.push_back(Below("identity rel err", worst_identity, tol.boundary_identity));
  r.checks.push_back(Below("Q vs 1/2 rel err", worst_quotient, tol.quotient_half));
}

// 2: discrete energies of d_t^k u conserved.
void EnergyConservation(const Options& o, CriterionResult& r) {
  const int n = o.reduced ? 1024 : 2048;
  const auto omega = Smooth(1.5, 0.5, 1.0, 0.0);
  wavesim::EvolveOptions eo;
  eo.resolution = n;
  eo.energy_orders = 2;
  const auto tr = wavesim::Evolve(
      omega, [](double x) { return std::sin(kPi * x) + 0.3 * std::sin(2 * kPi * x); },
      [](double x) { return 0.5 * std::sin(3 * kPi * x); }, 4.0, eo);
  for (int k = 0; k <= 2; ++k) {
    r.checks.push_back(Below("E" + std::to_string(k) + " drift", tr.EnergyDrift(k),
                             o.tolerances.energy_drift));
  }
}

// 3: the oscillator pair for three eps.
void OscillatorPair(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  std::vector<double> M, gamma;
  double residual = 0.0, fit = 0.0, gamma_min = INFINITY;
  for (double eps : {0.04, 0.02, 0.01}) {
    const auto pair = coeff::PeriodicPair::Build(eps);
    residual = std::max(residual, pair.max_residual());
    fit = std::max(fit, pair.decay_fit_error());
    M.push_back(pair.M());
    gamma.push_back(pair.gamma());
    gamma_min = std::min(gamma_min, pair.gamma());
  }
  r.checks.push_back(Below("ODE residual", residual, tol.ode_residual));
  r.checks.push_back(AtMost("M spread (" + Join(M) + ")", Spread(M), tol.oscillator_M_spread));
  r.checks.push_back(Below("decay fit err, n <= 20", fit, tol.decay_fit));
  r.checks.push_back({"gamma > 0", gamma_min > 0, Fmt(gamma_min), "> 0"});
  r.checks.push_back(AtMost("gamma spread (" + Join(gamma) + ")", Spread(gamma), tol.gamma_spread));
}

// 4: quasimode concentration on the scaled sequences.
void QuasimodeConcentration(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  const auto ce = ScaledCounterexample(6);
  const auto sweep = quasimodes::BoundarySmallnessSweep(ce.params, ce.pairs, ce.omega, {}, o.jobs);
  if (sweep.truncated_at) {
    r.checks.push_back({"sweep complete", false, "truncated at j = " + std::to_string(sweep.truncated_at),
                        "j = 2..6"});
    return;
  }
  double match = 0.0;
  std::vector<double> mass, s0, s1;
  for (const auto& row : sweep.rows) {
    match = std::max(match, std::abs(row.extreme_energy / row.extreme_closed_form - 1));
    mass.push_back(row.interior_mass * std::pow(row.h, 3));
    if (&row != &sweep.rows.front()) {
      s0.push_back(std::abs(row.slope0));
      s1.push_back(std::abs(row.slope1));
    }
  }
  auto increasing = [](const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  r.checks.push_back(AtMost("extreme vs closed form", match, tol.extreme_match));
  r.checks.push_back(AtMost("mass h^3 max/min (" + Join(mass) + ")", MaxOverMin(mass),
                            tol.interior_mass_factor));
  r.checks.push_back({"|slope| at x=0 increasing", increasing(s0), Join(s0), "strictly increasing"});
  r.checks.push_back({"|slope| at x=1 increasing", increasing(s1), Join(s1), "strictly increasing"});
}

int LongestRun(const std::vector<double>& growth, double factor) {
  int run = 0, best = 0;
  for (double g : growth) {
    run = g >= factor ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

// 5: Q_m(u_j) along the counterexample sequence.
void CounterexampleDivergence(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  const auto ce = ScaledCounterexample(o.reduced ? 5 : 6);
  observability::SweepOptions so;
  so.jobs = o.jobs;
  const auto table = observability::RunCounterexampleSweep(ce.params, ce.pairs, ce.omega, so);
  if (table.truncated_at) {
    r.checks.push_back({"sweep complete", false, table.truncation_reason, "all j"});
    return;
  }
  for (size_t i = 0; i < so.m_list.size(); ++i) {
    std::vector<double> growth, Q;
    for (const auto& g : table.growth) growth.push_back(g[i]);
    for (const auto& row : table.rows) Q.push_back(row.Q[i]);
    const int run = LongestRun(growth, tol.divergence_growth);
    r.checks.push_back({"Q" + std::to_string(so.m_list[i]) + " (" + Join(Q) + ") run of x" +
                            Fmt(tol.divergence_growth),
                        run >= tol.divergence_run, std::to_string(run),
                        ">= " + std::to_string(tol.divergence_run)});
  }
  std::vector<double> nh;
  for (const auto& row : table.rows) nh.push_back(row.numerator * row.h);
  r.checks.push_back(AtMost("numerator h max/min (" + Join(nh) + ")", MaxOverMin(nh),
                            tol.numerator_factor));
}

// 6: C_obs growth from cutoff 16 to 64, Weierstrass against the counterexample.
void ZygmundPositive(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  observability::EnsembleSpec spec;
  spec.random_members = o.reduced ? 8 : 16;
  observability::QuotientOptions qo;
  qo.resolution = 1024;
  auto growth = [&](const coeff::Coefficient& omega) {
    const auto c = observability::EstimateObservabilityConstant(
        omega, TwoTravelTimesPlus(omega), {16, 64}, spec, qo, o.jobs);
    return c[1].c_obs / c[0].c_obs;
  };
  r.checks.push_back(Below("Weierstrass growth", growth(Weierstrass()), tol.zygmund_growth));
  r.checks.push_back(AtLeast("counterexample growth", growth(ScaledCounterexample(6).omega),
                             tol.counterexample_growth));
}

// 7: labels of five samples and the not-BV trend of Weierstrass.
void ModulusClassifier(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  const int intervals = 1 << 16;
  const auto weier = Weierstrass();
  const auto ce = ScaledCounterexample(6).omega;
  struct Case {
    std::string name;
    std::function<double(double)> f;
    std::string expected;
  };
  const std::vector<Case> cases{
      {"constant", [](double) { return 1.0; }, "Lipschitz/BV"},
      {"|x-1/2|", [](double x) { return std::abs(x - 0.5); }, "Lipschitz/BV"},
      {"|x-1/2|^1/2", [](double x) { return std::sqrt(std::abs(x - 0.5)); }, "Hoelder"},
      {"Weierstrass", [&weier](double x) { return weier(x); }, "Zygmund"},
      {"counterexample-psi", [&ce](double x) { return ce(x); }, "below-log-Lipschitz"}};
  for (const auto& c : cases) {
    const auto samples = modulus::SampleFunction(c.f, intervals);
    const auto report = modulus::AnalyzeModulus(samples);
    const auto cls = modulus::ClassifyModulus(report, modulus::DyadicBlocks(samples.values, 10));
    r.checks.push_back({c.name, cls.label == c.expected, cls.label, c.expected});
    if (c.name == "Weierstrass") {
      r.checks.push_back(Below("Weierstrass Z ratio growth exponent", cls.zyg_growth,
                               modulus::kBoundedGrowth));
      r.checks.push_back({"Weierstrass TV run of x" + Fmt(tol.tv_growth) + " (" +
                              Join(report.tv.growth) + ")",
                          LongestRun(report.tv.growth, tol.tv_growth) >= tol.tv_levels,
                          std::to_string(LongestRun(report.tv.growth, tol.tv_growth)),
                          ">= " + std::to_string(tol.tv_levels)});
    }
  }
}

// 8: dyadic blocks of Weierstrass and reconstruction of band-limited input.
void DyadicCharacterization(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  const auto weier = Weierstrass();
  const auto samples = modulus::SampleFunction([&weier](double x) { return weier(x); }, 1 << 16);
  const auto spec = modulus::DyadicBlocks(samples.values, 10);
  double lo = INFINITY, hi = 0.0;
  for (size_t i = 0; i < spec.j.size(); ++i) {
    if (spec.j[i] < 3) continue;
    const double v = std::ldexp(spec.norm_inf[i], spec.j[i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  r.checks.push_back(AtLeast("min 2^j |D_j|, j=3..10", lo, tol.dyadic_low));
  r.checks.push_back(AtMost("max 2^j |D_j|, j=3..10", hi, tol.dyadic_high));

  const int n = 1 << 12, j_max = 9;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    f[i] = 0.7 + std::cos(2 * kPi * 3 * x) + 0.5 * std::sin(2 * kPi * 37 * x + 0.4) +
           0.25 * std::cos(2 * kPi * 200 * x);
  }
  const auto blocks = modulus::DyadicBlocks(f, j_max);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& b : blocks.blocks) s += b[i];
    err = std::max(err, std::abs(s - f[i]));
  }
  r.checks.push_back(Below("reconstruction err", err, tol.reconstruction));
}

// 9: HUM benchmark and the cost against the observability constant.
void HumBenchmark(const Options& o, CriterionResult& r) {
  const auto& tol = o.tolerances;
  const int n = 256;
  const double T = 2.5;
  const auto one = Constant(1.0);
  observability::ControlOptions co;
  co.resolution = n;
  co.tolerance = tol.control_energy;
  co.max_iterations = tol.control_iterations;
  observability::QuotientOptions qo;
  qo.resolution = n;
  const double c_obs = observability::GramianConstant(one, T, 16, 0, qo);
  std::vector<double> ratios;
  for (int k = 1; k <= 4; ++k) {
    std::vector<double> y0(n + 1), y1(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) y0[i] = std::sin(k * kPi * i / n);
    const auto res = observability::HumControl(one, y0, y1, T, co);
    if (k == 1) {
      r.checks.push_back(Below("terminal rel energy", res.terminal_relative_energy, tol.control_energy));
      r.checks.push_back(AtMost("CG iterations", res.iterations, tol.control_iterations));
    }
    ratios.push_back(res.cost / c_obs);
  }
  double worst = 0.0;
  for (double q : ratios) worst = std::max({worst, q, 1.0 / q});
  r.checks.push_back(AtMost("cost/C_obs k=1..4 (" + Join(ratios) + "; C_obs " + Fmt(c_obs) +
                                ", 1/C_obs " + Fmt(1.0 / c_obs) + ") worst factor",
                            worst, tol.duality_factor));
}

// 10: sidewise from the x = 0 trace against the forward field.
void SidewiseCrossValidation(const Options& o, CriterionResult& r) {
  const int nc = o.reduced ? 256 : 512, nf = 2 * nc;
  const double T = 3.0;
  const std::vector<coeff::Coefficient> densities{
      Smooth(1.5, 0.5, 1.0, 0.0), Smooth(2.0, 0.6, 2.0, 0.3), Smooth(1.3, 0.25, 3.0, 1.1)};
  auto u0 = [](double x) { return std::sin(kPi * x) + 0.4 * std::sin(2 * kPi * x); };
  auto u1 = [](double x) { return 0.8 * std::sin(kPi * x); };
  for (size_t d = 0; d < densities.size(); ++d) {
    const auto& omega = densities[d];
    std::vector<int> xs_f, xs_c;
    for (int i = nf / 16; i <= nf / 2; i += nf / 16) {
      xs_f.push_back(i);
      xs_c.push_back(i / 2);
    }
    wavesim::EvolveOptions ec;
    ec.resolution = nc;
    ec.probe_nodes = xs_c;
    const auto coarse = wavesim::Evolve(omega, u0, u1, T, ec);
    wavesim::EvolveOptions ef;
    ef.resolution = nf;
    ef.probe_nodes = xs_f;
    ef.steps = 2 * coarse.steps;
    const auto fine = wavesim::Evolve(omega, u0, u1, T, ef);
    const std::vector<double> zero(fine.trace0.size(), 0.0);
    const auto side = wavesim::SidewiseEvolve(omega, zero, fine.trace0, fine.dt, 0.0, 0.5, nf / 2);

    double e_forward = 0.0, e_side = 0.0;
    for (size_t p = 0; p < xs_f.size(); ++p) {
      const int i = xs_f[p];
      const double t_lo = (side.first_valid[i] + 2) * side.dt;
      const double t_hi = (side.last_valid[i] - 2) * side.dt;
      for (int l = 0; l <= coarse.steps; ++l) {
        const double t = coarse.t[l];
        if (t < t_lo || t > t_hi) continue;
        const double uf = fine.probes[p][2 * l];
        e_forward = std::max(e_forward, std::abs(coarse.probes[p][l] - uf));
        e_side = std::max(e_side, std::abs(side.At(i, t) - uf));
      }
    }
    r.checks.push_back(AtMost("density " + std::to_string(d + 1) + " sidewise err (forward " +
                                  Fmt(e_forward) + ") ratio",
                              e_side / e_forward, o.tolerances.sidewise_factor));
  }
}

// 11: the three cond-N inequalities in extended precision.
void PaperStrictSequences(const Options&, CriterionResult& r) {
  const double M = coeff::ReferenceM();
  for (int N : {2, 4, 8}) {
    const auto p = coeff::MakeSequences(coeff::PsiIdentity(), N, 2, 6,
                                        coeff::SequenceMode::kPaperStrict, M);
    std::string table;
    bool all = true;
    for (const auto& f : p.flags) {
      table += (table.empty() ? "" : " ") + std::to_string(f.j) + ":" + (f.eps_small ? "Y" : "n") +
               (f.tail ? "Y" : "n") + (f.head ? "Y" : "n");
      all = all && f.all();
    }
    if (N == 8) {
      r.checks.push_back({"N=8 all satisfied", all, table, "all Y"});
    } else {
      r.checks.push_back({"N=" + std::to_string(N) + " (reported)", true, table, "table only"});
    }
  }
}

struct Entry {
  int id;
  const char* title;
  double budget;
  void (*run)(const Options&, CriterionResult&);
};

const Entry kCriteria[] = {
    {1, "constant-coefficient boundary identity", 10, BoundaryIdentity},
    {2, "energy conservation", 30, EnergyConservation},
    {3, "oscillator pair", 5, OscillatorPair},
    {4, "quasimode concentration", 300, QuasimodeConcentration},
    {5, "counterexample divergence", 600, CounterexampleDivergence},
    {6, "Zygmund positive result", 300, ZygmundPositive},
    {7, "modulus classifier", 60, ModulusClassifier},
    {8, "dyadic characterization", 30, DyadicCharacterization},
    {9, "HUM control", 120, HumBenchmark},
    {10, "sidewise/forward cross-validation", 60, SidewiseCrossValidation},
    {11, "paper-strict sequence validation", 1, PaperStrictSequences},
};

}  // namespace

std::vector<CriterionResult> RunAll(const Options& options,
                                    const std::function<void(const CriterionResult&)>& on_done) {
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(options, r);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.within_budget = r.seconds < r.budget_seconds;
    r.passed = r.error.empty() && r.within_budget && !r.checks.empty() &&
               std::all_of(r.checks.begin(), r.checks.end(), [](const Check& k) { return k.passed; });
    if (on_done) on_done(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string FormatLine(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS " : "FAIL ") << (r.id < 10 ? " " : "") << r.id << "  " << r.title << ": ";
  for (size_t i = 0; i < r.checks.size(); ++i) {
    const auto& k = r.checks[i];
    s << (i ? "; " : "") << (k.passed ? "" : "[x] ") << k.name << " = " << k.measured << " ("
      << k.limit << ")";
  }
  if (!r.error.empty()) s << (r.checks.empty() ? "" : "; ") << "error: " << r.error;
  if (!r.within_budget) s << "; over the " << Fmt(r.budget_seconds) << " s budget";
  return s.str();
}

nlohmann::json ToJson(const std::vector<CriterionResult>& results) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& k : r.checks) {
      checks.push_back({{"name", k.name}, {"passed", k.passed}, {"measured", k.measured},
                        {"limit", k.limit}});
    }
    j.push_back({{"id", r.id},
                 {"title", r.title},
                 {"passed", r.passed},
                 {"checks", checks},
                 {"within_budget", r.within_budget},
                 {"error", r.error}});
  }
  return j;
}

}  // namespace acceptance
}  // namespace roughwave
