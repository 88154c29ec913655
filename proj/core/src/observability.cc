#include "roughwave/observability.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "roughwave/errors.h"
#include "roughwave/modulus.h"
#include "roughwave/numerics.h"

namespace roughwave {
namespace observability {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

int Resolution(const Datum& d) { return static_cast<int>(d.u0.size()) - 1; }

void CheckDatum(const Datum& d) {
  if (d.u0.size() != d.u1.size() || d.u0.size() < 9) {
    throw std::invalid_argument("datum: u0 and u1 must share a length of at least 9");
  }
}

template <typename F>
void ParallelFor(size_t count, int jobs, F&& body) {
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t k = next++; k < count; k = next++) body(k);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(std::max(1, jobs), static_cast<int>(count)); ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) t.join();
}

wavesim::EvolveOptions EvolveFor(int n, const QuotientOptions& options) {
  wavesim::EvolveOptions o;
  o.resolution = n;
  o.cfl = options.cfl;
  return o;
}

double GrowthFactor(const std::vector<ConstantEstimate>& c, int m, double beta) {
  double first = 0.0, last = 0.0;
  bool seen = false;
  for (const auto& e : c) {
    if (e.m != m || e.beta != beta) continue;
    if (!seen) first = e.c_obs;
    last = e.c_obs;
    seen = true;
  }
  return seen && first > 0 ? last / first : kInf;
}

}  // namespace

double InitialNorm(const Datum& d) {
  CheckDatum(d);
  const int n = Resolution(d);
  const double dx = 1.0 / n;
  double grad = 0.0, vel = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = d.u0[i + 1] - d.u0[i];
    grad += g * g;
  }
  for (int i = 1; i < n; ++i) vel += d.u1[i] * d.u1[i];
  return grad / dx + vel * dx;
}

double EnergyNorm(const Datum& d, const Coefficient& omega) {
  CheckDatum(d);
  const int n = Resolution(d);
  const double dx = 1.0 / n;
  double grad = 0.0, vel = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = d.u0[i + 1] - d.u0[i];
    grad += g * g;
  }
  for (int i = 1; i < n; ++i) vel += omega(i * dx) * d.u1[i] * d.u1[i];
  return grad / dx + vel * dx;
}

std::vector<Quotient> QuotientsFromTrace(const std::vector<double>& trace, double dt,
                                         double numerator, int m_max, double floor) {
  std::vector<Quotient> out;
  std::vector<double> d(trace);
  double cumulative = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    std::vector<double> sq(d.size());
    for (size_t l = 0; l < d.size(); ++l) sq[l] = d[l] * d[l];
    Quotient q;
    q.m = m;
    q.numerator = numerator;
    q.denominator = Trapezoid(sq, dt);
    cumulative += q.denominator;
    q.cumulative_denominator = cumulative;
    q.unbounded = q.denominator <= floor * numerator;
    q.value = q.unbounded ? kInf : numerator / q.denominator;
    q.cumulative_value = cumulative <= floor * numerator ? kInf : numerator / cumulative;
    out.push_back(q);
    if (m < m_max) d = Differentiate(d, dt);
  }
  return out;
}

std::vector<Quotient> ObservabilityQuotients(const Coefficient& omega, const Datum& datum,
                                             double T, int m_max,
                                             const QuotientOptions& options) {
  CheckDatum(datum);
  const double num = InitialNorm(datum);
  if (!(num > 0)) throw std::invalid_argument("quotient: zero data (0/0)");
  const auto tr = wavesim::EvolveNodal(omega, datum.u0, datum.u1, T,
                                       EvolveFor(Resolution(datum), options));
  return QuotientsFromTrace(tr.trace0, tr.dt, num, m_max, options.floor);
}

std::vector<Quotient> FractionalQuotients(const Coefficient& omega, const Datum& datum,
                                          double T, const std::vector<double>& betas,
                                          const QuotientOptions& options) {
  CheckDatum(datum);
  const double num = InitialNorm(datum);
  if (!(num > 0)) throw std::invalid_argument("quotient: zero data (0/0)");
  const auto tr = wavesim::EvolveNodal(omega, datum.u0, datum.u1, T,
                                       EvolveFor(Resolution(datum), options));
  std::vector<Quotient> out;
  for (double beta : betas) {
    Quotient q;
    q.beta = beta;
    q.numerator = num;
    const double norm = wavesim::TraceSobolevNorm(tr.trace0, tr.dt, beta);
    q.denominator = q.cumulative_denominator = norm * norm;
    q.unbounded = q.denominator <= options.floor * num;
    q.value = q.cumulative_value = q.unbounded ? kInf : num / q.denominator;
    out.push_back(q);
  }
  return out;
}

Datum SineMode(int n, int k, double amplitude, bool velocity) {
  Datum d;
  d.label = (velocity ? "velocity-mode-" : "mode-") + std::to_string(k);
  d.u0.assign(n + 1, 0.0);
  d.u1.assign(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    const double s = amplitude * std::sin(k * kPi * i / n);
    if (velocity) {
      d.u1[i] = k * kPi * s;
    } else {
      d.u0[i] = s;
    }
  }
  return d;
}

Datum RandomMixture(int n, int cutoff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Datum d;
  d.label = "mixture-" + std::to_string(seed);
  d.u0.assign(n + 1, 0.0);
  d.u1.assign(n + 1, 0.0);
  for (int k = 1; k <= cutoff; ++k) {
    const double a = normal(rng) / (k * kPi);
    const double b = normal(rng);
    for (int i = 1; i < n; ++i) {
      const double s = std::sin(k * kPi * i / n);
      d.u0[i] += a * s;
      d.u1[i] += b * s;
    }
  }
  return d;
}

Datum Packet(int n, double center, double width, int k) {
  Datum d;
  std::ostringstream label;
  label << "packet-" << center << "-" << k;
  d.label = label.str();
  d.u0.assign(n + 1, 0.0);
  d.u1.assign(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double z = (x - center) / width;
    d.u0[i] = std::exp(-z * z) * std::sin(k * kPi * x);
  }
  return d;
}

namespace {

// Quasimode data with the boundary values lifted off linearly: the cosine
// phase as displacement, the sine phase as velocity h phi.
std::vector<Datum> QuasimodeData(const Coefficient& omega, int n, int cutoff) {
  std::vector<Datum> out;
  const auto& prov = omega.provenance();
  if (!prov.contains("records")) return out;
  for (const auto& rec : prov["records"]) {
    const double h = rec["h"].get<double>();
    if (2 * h > cutoff) continue;
    quasimodes::QuasimodeSpec spec;
    spec.j = rec["j"].get<int>();
    spec.h = h;
    spec.center = rec["m"].get<double>();
    quasimodes::SolveOptions so;
    so.min_samples = n;
    quasimodes::QuasimodeResult q;
    try {
      q = quasimodes::SolveQuasimode(omega, spec, so);
    } catch (const ScaleOutOfReach&) {
      continue;
    }
    const size_t stride = (q.x.size() - 1) / n;
    std::vector<double> lifted(n + 1);
    const double a = q.phi.front(), b = q.phi.back();
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      lifted[i] = q.phi[i * stride] - (a * (1 - x) + b * x);
    }
    Datum c{"quasimode-cos-" + std::to_string(spec.j), lifted, std::vector<double>(n + 1, 0.0)};
    Datum s{"quasimode-sin-" + std::to_string(spec.j), std::vector<double>(n + 1, 0.0), lifted};
    for (double& v : s.u1) v *= h;
    out.push_back(std::move(c));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<Datum> BuildEnsemble(const Coefficient& omega, int n, int cutoff,
                                 const EnsembleSpec& spec) {
  std::vector<Datum> out;
  for (int r = 0; r < spec.random_members; ++r) {
    out.push_back(RandomMixture(n, cutoff, spec.seed * 1000003ULL + r));
  }
  if (spec.adversarial) {
    out.push_back(SineMode(n, cutoff));
    out.push_back(SineMode(n, std::max(1, cutoff - 1)));
    out.push_back(SineMode(n, cutoff, 1.0, true));
    out.push_back(Packet(n, 0.85, 0.05, cutoff));
    out.push_back(Packet(n, 0.7, 0.05, cutoff));
    for (auto& d : QuasimodeData(omega, n, cutoff)) out.push_back(std::move(d));
  }
  return out;
}

std::vector<ConstantEstimate> EstimateObservabilityConstant(
    const Coefficient& omega, double T, const std::vector<int>& cutoffs,
    const EnsembleSpec& spec, const QuotientOptions& options, int jobs) {
  std::vector<ConstantEstimate> out;
  for (int cutoff : cutoffs) {
    if (2 * cutoff > options.resolution) {
      throw std::invalid_argument("ensemble: cutoff above half the resolution");
    }
    const auto members = BuildEnsemble(omega, options.resolution, cutoff, spec);
    std::vector<double> values(members.size(), 0.0);
    ParallelFor(members.size(), jobs, [&](size_t k) {
      if (spec.beta >= 0) {
        values[k] = FractionalQuotients(omega, members[k], T, {spec.beta}, options)[0].value;
      } else {
        values[k] = ObservabilityQuotients(omega, members[k], T, spec.m, options)[spec.m].value;
      }
    });
    ConstantEstimate e;
    e.cutoff = cutoff;
    e.m = spec.m;
    e.beta = spec.beta;
    e.members = static_cast<int>(members.size());
    for (size_t k = 0; k < members.size(); ++k) {
      if (std::isinf(values[k])) ++e.unbounded;
      if (values[k] > e.c_obs) {
        e.c_obs = values[k];
        e.worst = members[k].label;
      }
    }
    out.push_back(e);
  }
  return out;
}

double GramianConstant(const Coefficient& omega, double T, int cutoff, int m,
                       const QuotientOptions& options) {
  const int n = options.resolution;
  if (2 * cutoff > n) throw std::invalid_argument("gramian: cutoff above half the resolution");
  std::vector<Datum> basis;
  for (int k = 1; k <= cutoff; ++k) {
    basis.push_back(SineMode(n, k, 1.0 / (k * kPi)));
    basis.push_back(SineMode(n, k, 1.0 / (k * kPi), true));
  }
  const int dim = static_cast<int>(basis.size());
  std::vector<std::vector<double>> traces(dim);
  double dt = 0.0;
  for (int a = 0; a < dim; ++a) {
    const auto tr = wavesim::EvolveNodal(omega, basis[a].u0, basis[a].u1, T, EvolveFor(n, options));
    dt = tr.dt;
    traces[a] = tr.trace0;
    for (int k = 0; k < m; ++k) traces[a] = Differentiate(traces[a], dt);
  }
  const double dx = 1.0 / n;
  Eigen::MatrixXd G(dim, dim), N(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      std::vector<double> prod(traces[a].size());
      for (size_t l = 0; l < prod.size(); ++l) prod[l] = traces[a][l] * traces[b][l];
      G(a, b) = G(b, a) = Trapezoid(prod, dt);
      double grad = 0.0, vel = 0.0;
      for (int i = 0; i < n; ++i) {
        grad += (basis[a].u0[i + 1] - basis[a].u0[i]) * (basis[b].u0[i + 1] - basis[b].u0[i]);
      }
      for (int i = 1; i < n; ++i) vel += basis[a].u1[i] * basis[b].u1[i];
      N(a, b) = N(b, a) = grad / dx + vel * dx;
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(G, N);
  if (ges.info() != Eigen::Success) throw NumericError("gramian: eigen solver failed");
  const double lmin = ges.eigenvalues().minCoeff();
  return lmin > 0 ? 1.0 / lmin : kInf;
}

ObservabilityReport BuildReport(const Coefficient& omega, double T, const ReportSpec& spec,
                                const QuotientOptions& options, int jobs) {
  ObservabilityReport r;
  r.omega = coeff::ToJson(omega);
  r.T = T;
  r.T_omega = coeff::ComputeTravelTime(omega).value;
  r.admissible = T > 2 * r.T_omega;
  const int n = options.resolution;

  EnsembleSpec es = spec.ensemble;
  for (int m = 0; m <= spec.m_max; ++m) {
    es.m = m;
    es.beta = -1.0;
    for (auto& e : EstimateObservabilityConstant(omega, T, spec.cutoffs, es, options, jobs)) {
      r.constants.push_back(e);
    }
    if (r.sufficient_m < 0 && GrowthFactor(r.constants, m, -1.0) < 1.5) r.sufficient_m = m;
  }
  for (double beta : spec.betas) {
    es.m = 0;
    es.beta = beta;
    for (auto& e : EstimateObservabilityConstant(omega, T, spec.cutoffs, es, options, jobs)) {
      r.constants.push_back(e);
    }
    if (r.sufficient_beta < 0 && GrowthFactor(r.constants, 0, beta) < 1.5) {
      r.sufficient_beta = beta;
    }
  }

  EnsembleSpec det = spec.ensemble;
  det.random_members = 0;
  const auto data = BuildEnsemble(omega, n, spec.cutoffs.back(), det);
  r.quotients.resize(data.size());
  ParallelFor(data.size(), jobs, [&](size_t k) {
    auto q = ObservabilityQuotients(omega, data[k], T, spec.m_max, options);
    const auto f = FractionalQuotients(omega, data[k], T, spec.betas, options);
    q.insert(q.end(), f.begin(), f.end());
    r.quotients[k] = {data[k].label, q};
  });

  if (spec.gramian_cutoff > 0 && 2 * spec.gramian_cutoff <= n) {
    r.gramian = GramianConstant(omega, T, spec.gramian_cutoff, 0, options);
  }
  const auto samples = modulus::SampleFunction([&omega](double x) { return omega(x); }, 4096);
  r.predicted_loss_scale = modulus::AnalyzeModulus(samples).ll_pointwise() / omega.lower();
  return r;
}

namespace {

struct PhaseRun {
  std::vector<Quotient> q;
  double residual = 0.0;
  bool incompatible = false;
};

// u = v + z for v = phi(x) cos(h t) (or sin), z the Dirichlet correction.
PhaseRun RunPhase(const Coefficient& omega, const quasimodes::QuasimodeResult& q,
                  int n, double T, bool sine, int m_max, double cfl) {
  const double h = q.h;
  const double a = q.phi.front(), b = q.phi.back(), da = q.dphi.front();
  auto wave = [h, sine](double t) { return sine ? std::sin(h * t) : std::cos(h * t); };
  wavesim::BoundaryForcing forcing{[a, wave](double t) { return -a * wave(t); },
                                   [b, wave](double t) { return -b * wave(t); }};
  wavesim::EvolveOptions o;
  o.resolution = n;
  o.cfl = cfl;
  o.probe_nodes = {0, n};
  const auto z = wavesim::EvolveInhomogeneous(omega, forcing, T, o);
  const auto& tr = z.trajectory;
  std::vector<double> trace(tr.t.size());
  PhaseRun out;
  for (size_t l = 0; l < trace.size(); ++l) {
    const double t = tr.t[l];
    trace[l] = da * wave(t) + tr.trace0[l];
    out.residual = std::max({out.residual, std::abs(a * wave(t) + tr.probes[0][l]),
                             std::abs(b * wave(t) + tr.probes[1][l])});
  }
  // Numerator of the real solution: int phi'^2 (cosine) or int h^2 omega phi^2 (sine).
  std::vector<double> dens(q.x.size());
  for (size_t i = 0; i < dens.size(); ++i) {
    dens[i] = sine ? h * h * omega(q.x[i]) * q.phi[i] * q.phi[i] : q.dphi[i] * q.dphi[i];
  }
  const double num = Trapezoid(dens, 1.0 / (q.x.size() - 1));
  out.q = QuotientsFromTrace(trace, tr.dt, num, m_max, 1e-26);
  out.incompatible = z.incompatible_start;
  return out;
}

int SweepResolution(double h, const SweepOptions& o) {
  int n = 1;
  while (n < std::max<double>(o.min_resolution, 16 * h)) n <<= 1;
  if (n > o.max_resolution) {
    throw ScaleOutOfReach("sweep: resolution " + std::to_string(n) + " above the cap " +
                          std::to_string(o.max_resolution));
  }
  return n;
}

DivergenceRow SweepRow(const Coefficient& omega, const quasimodes::QuasimodeSpec& spec,
                       double eps, double T, const SweepOptions& o) {
  const int n = SweepResolution(spec.h, o);
  auto qo = o.quasimode;
  qo.min_samples = std::max(qo.min_samples, n);
  const auto q = quasimodes::SolveQuasimode(omega, spec, qo);
  const int m_max = *std::max_element(o.m_list.begin(), o.m_list.end());
  const auto c = RunPhase(omega, q, n, T, false, m_max, 0.9);
  const auto s = RunPhase(omega, q, n, T, true, m_max, 0.9);
  DivergenceRow row;
  row.j = spec.j;
  row.h = spec.h;
  row.eps = eps;
  row.resolution = n;
  row.numerator = c.q[0].numerator + s.q[0].numerator;
  for (int m : o.m_list) {
    row.Q.push_back(std::max(c.q[m].value, s.q[m].value));
    row.denominator.push_back(std::min(c.q[m].denominator, s.q[m].denominator));
  }
  row.boundary_smallness = q.phi.front() * q.phi.front() + q.phi.back() * q.phi.back() +
                           q.dphi.front() * q.dphi.front();
  row.denominator_bound =
      std::pow(spec.h, 2.0 * (o.m_list.front() + 3)) * row.boundary_smallness;
  row.boundary_residual = std::max(c.residual, s.residual);
  row.incompatible_start = c.incompatible || s.incompatible;
  return row;
}

}  // namespace

DivergenceTable RunCounterexampleSweep(const coeff::CounterexampleParams& params,
                                       const coeff::PairMap& pairs,
                                       const Coefficient& omega,
                                       const SweepOptions& options) {
  if (options.m_list.empty()) throw std::invalid_argument("sweep: empty m list");
  DivergenceTable table;
  table.m_list = options.m_list;
  table.T = options.T > 0 ? options.T : 2 * coeff::ComputeTravelTime(omega).value + 0.5;
  const size_t count = params.records.size();
  std::vector<DivergenceRow> rows(count);
  std::vector<std::string> failures(count);
  ParallelFor(count, options.jobs, [&](size_t k) {
    const auto& rec = params.records[k];
    try {
      rows[k] = SweepRow(omega, quasimodes::SpecFor(params, pairs, rec.j), rec.eps, table.T,
                         options);
    } catch (const ScaleOutOfReach& e) {
      failures[k] = e.what();
    }
  });
  for (size_t k = 0; k < count; ++k) {
    if (!failures[k].empty()) {
      table.truncated_at = params.records[k].j;
      table.truncation_reason = failures[k];
      break;
    }
    table.rows.push_back(rows[k]);
  }
  for (size_t k = 1; k < table.rows.size(); ++k) {
    std::vector<double> g;
    for (size_t i = 0; i < options.m_list.size(); ++i) {
      g.push_back(table.rows[k].Q[i] / table.rows[k - 1].Q[i]);
    }
    table.growth.push_back(g);
  }
  return table;
}

std::vector<LambdaRow> RunLambdaSweep(const coeff::CounterexampleParams& params,
                                      const coeff::PairMap& pairs,
                                      const SweepOptions& options) {
  const auto densities = coeff::MakeLambdaDensities(params, pairs);
  std::vector<LambdaRow> rows(densities.size());
  SweepOptions o = options;
  o.m_list = {0};
  ParallelFor(densities.size(), options.jobs, [&](size_t k) {
    const auto& rec = params.records[k];
    const auto& omega = densities[k];
    const double T = o.T > 0 ? o.T : 2 * coeff::ComputeTravelTime(omega).value + 0.5;
    const auto row = SweepRow(omega, quasimodes::SpecFor(params, pairs, rec.j), rec.eps, T, o);
    const auto samples = modulus::SampleFunction([&omega](double x) { return omega(x); }, 1 << 16);
    rows[k] = {rec.j, rec.h, row.Q[0], modulus::AnalyzeModulus(samples).ll_pointwise(),
               std::log(rec.h)};
  });
  return rows;
}

UniqueContinuation UniqueContinuationCheck(const wavesim::WaveTrajectory& traj, int m) {
  UniqueContinuation u;
  const double T = traj.T;
  const double lo = std::max(0.0, T / 2 - 1), hi = std::min(T, T / 2 + 1);
  double peak = 0.0;
  for (double v : traj.trace0) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) {
    u.vacuous = true;
    return u;
  }
  std::vector<double> window;
  for (size_t l = 0; l < traj.t.size(); ++l) {
    if (traj.t[l] >= lo - 1e-12 && traj.t[l] <= hi + 1e-12) {
      window.push_back(traj.trace0[l] * traj.trace0[l]);
    }
  }
  u.window_energy = Trapezoid(window, traj.dt);
  std::vector<double> d(traj.trace0);
  for (int k = 0; k < m; ++k) d = Differentiate(d, traj.dt);
  for (double& v : d) v *= v;
  u.derivative_energy = Trapezoid(d, traj.dt);
  u.ratio = u.derivative_energy > 0 ? u.window_energy / u.derivative_energy : kInf;
  return u;
}

nlohmann::json ToJson(const Quotient& q) {
  auto num = [](double v) { return std::isinf(v) ? nlohmann::json("unbounded") : nlohmann::json(v); };
  nlohmann::json j{{"numerator", q.numerator},
                   {"denominator", q.denominator},
                   {"cumulative_denominator", q.cumulative_denominator},
                   {"value", num(q.value)},
                   {"cumulative_value", num(q.cumulative_value)},
                   {"status", q.unbounded ? "quotient unbounded at this resolution" : "ok"}};
  if (q.beta >= 0) {
    j["beta"] = q.beta;
  } else {
    j["m"] = q.m;
  }
  return j;
}

nlohmann::json ToJson(const ObservabilityReport& r) {
  nlohmann::json j;
  j["omega"] = r.omega;
  j["T"] = r.T;
  j["T_omega"] = r.T_omega;
  j["admissible"] = r.admissible;
  for (const auto& [label, qs] : r.quotients) {
    nlohmann::json entry{{"datum", label}};
    for (const auto& q : qs) entry["quotients"].push_back(ToJson(q));
    j["data"].push_back(entry);
  }
  for (const auto& c : r.constants) {
    nlohmann::json e{{"cutoff", c.cutoff}, {"c_obs", c.c_obs}, {"worst", c.worst},
                     {"members", c.members}, {"unbounded", c.unbounded}};
    if (c.beta >= 0) {
      e["beta"] = c.beta;
    } else {
      e["m"] = c.m;
    }
    j["constants"].push_back(e);
  }
  j["gramian_constant"] = r.gramian;
  j["sufficient_m"] = r.sufficient_m;
  j["sufficient_beta"] = r.sufficient_beta;
  j["predicted_loss_scale"] = r.predicted_loss_scale;
  return j;
}

std::string DivergenceCsv(const DivergenceTable& t) {
  std::ostringstream out;
  out.precision(12);
  out << "j,h";
  for (int m : t.m_list) out << ",Q_" << m;
  out << ",numerator";
  for (int m : t.m_list) out << ",denominator_" << m;
  out << ",boundary_smallness\n";
  for (const auto& r : t.rows) {
    out << r.j << ',' << r.h;
    for (double q : r.Q) out << ',' << q;
    out << ',' << r.numerator;
    for (double d : r.denominator) out << ',' << d;
    out << ',' << r.boundary_smallness << '\n';
  }
  return out.str();
}

}  // namespace observability
}  // namespace roughwave
