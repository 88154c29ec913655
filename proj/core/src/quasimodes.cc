#include "roughwave/quasimodes.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "roughwave/errors.h"
#include "roughwave/numerics.h"

namespace roughwave {
namespace quasimodes {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;
constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4 * kPi * kPi;
constexpr double kPanel = 1e-4;

// In the variable s with x = x0 + dir s, so every leg integrates forward.
struct Rhs {
  const Coefficient* omega;
  double h2;
  double x0;
  double dir;
  void operator()(const State& y, State& dy, double s) const {
    dy[0] = y[1];
    dy[1] = -h2 * (*omega)(x0 + dir * s) * y[0];
  }
};

// Integrates from xs[0] through the listed monotone points; returns
// (phi, phi') at each of them.
std::vector<State> Shoot(const Coefficient& omega, double h, State y0,
                         const std::vector<double>& xs, double tolerance,
                         long* steps) {
  if (xs.size() == 1) return {y0};
  const double x0 = xs.front();
  const double dir = xs.back() > x0 ? 1.0 : -1.0;
  std::vector<double> ss(xs.size());
  for (size_t k = 0; k < xs.size(); ++k) ss[k] = dir * (xs[k] - x0);
  const double max_dt = 1.0 / (16.0 * h);
  // Local errors pile up over ~n_j periods; a quarter of the budget per step
  // keeps the global error inside the requested tolerance.
  const double step_tol = tolerance / 4;
  auto stepper = odeint::make_controlled(step_tol, step_tol, max_dt,
                                         odeint::runge_kutta_dopri5<State>());
  std::vector<State> out;
  out.reserve(xs.size());
  State y{y0[0], dir * y0[1]};
  const size_t n = odeint::integrate_times(
      stepper, Rhs{&omega, h * h, x0, dir}, y, ss.begin(), ss.end(), max_dt / 4,
      [&out, dir](const State& z, double) { out.push_back({z[0], dir * z[1]}); });
  if (steps) *steps += static_cast<long>(n);
  return out;
}

bool SmoothAcrossBreaks(const Coefficient& omega) {
  switch (omega.kind()) {
    case coeff::Kind::kConstant:
    case coeff::Kind::kCounterexamplePsi:
    case coeff::Kind::kCounterexampleLambda:
      return true;
    default:
      return false;
  }
}

std::vector<double> BreaksBetween(const Coefficient& omega, double a, double b) {
  std::vector<double> out;
  for (double x : omega.breakpoints()) {
    if (x > a && x < b) out.push_back(x);
  }
  return out;
}

// Ten-point Gauss panels no wider than `panel`, aligned with the breaks.
double PanelIntegral(const std::function<double(double)>& f, double a, double b,
                     const std::vector<double>& breaks, double panel) {
  std::vector<double> edges{a};
  edges.insert(edges.end(), breaks.begin(), breaks.end());
  edges.push_back(b);
  double sum = 0.0;
  for (size_t k = 0; k + 1 < edges.size(); ++k) {
    const double len = edges[k + 1] - edges[k];
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / panel)));
    for (int p = 0; p < pieces; ++p) {
      const double lo = edges[k] + len * p / pieces;
      const double hi = edges[k] + len * (p + 1) / pieces;
      sum += boost::math::quadrature::gauss<double, 10>::integrate(f, lo, hi);
    }
  }
  return sum;
}

}  // namespace

QuasimodeSpec SpecFor(const coeff::CounterexampleParams& params,
                      const coeff::PairMap& pairs, int j) {
  const auto& r = params.record(j);
  QuasimodeSpec spec;
  spec.j = j;
  spec.h = r.h;
  spec.center = r.m;
  spec.radius = r.r / 2;
  auto it = pairs.find(j);
  if (it != pairs.end()) spec.pair = it->second;
  return spec;
}

size_t QuasimodeResult::Index(double at) const {
  const double n = static_cast<double>(x.size() - 1);
  return static_cast<size_t>(std::clamp(std::lround(at * n), 0L, static_cast<long>(n)));
}

QuasimodeResult SolveQuasimode(const Coefficient& omega, const QuasimodeSpec& spec,
                               const SolveOptions& options) {
  if (!(spec.h > 0)) throw std::invalid_argument("quasimode: h must be positive");
  if (!(spec.center >= 0 && spec.center <= 1)) {
    throw std::invalid_argument("quasimode: center outside [0, 1]");
  }
  if (!(options.tolerance > 0)) throw std::invalid_argument("quasimode: tolerance must be positive");
  omega.CheckHyperbolicity();

  int n = 1;
  const double wanted = std::max<double>(options.min_samples, options.samples_per_period * spec.h);
  while (n < wanted) n <<= 1;

  QuasimodeResult res;
  res.j = spec.j;
  res.h = spec.h;
  res.center = spec.center;
  res.radius = spec.radius;
  res.tolerance = options.tolerance;
  res.x.resize(n + 1);
  res.phi.resize(n + 1);
  res.dphi.resize(n + 1);
  for (int i = 0; i <= n; ++i) res.x[i] = static_cast<double>(i) / n;

  // Center may sit off the grid for custom specs; it is prepended to both legs.
  const int ic = static_cast<int>(std::ceil(spec.center * n - 1e-9));
  std::vector<double> right{spec.center}, left{spec.center};
  for (int i = ic; i <= n; ++i) {
    if (res.x[i] > spec.center) right.push_back(res.x[i]);
  }
  for (int i = std::min(ic, n); i >= 0; --i) {
    if (res.x[i] < spec.center) left.push_back(res.x[i]);
  }
  const State y0{1.0, 0.0};
  const auto yr = Shoot(omega, spec.h, y0, right, options.tolerance, &res.steps);
  const auto yl = Shoot(omega, spec.h, y0, left, options.tolerance, &res.steps);
  for (size_t k = 0; k < right.size(); ++k) {
    const size_t i = res.Index(right[k]);
    if (std::abs(res.x[i] - right[k]) < 1e-12) {
      res.phi[i] = yr[k][0];
      res.dphi[i] = yr[k][1];
    }
  }
  for (size_t k = 0; k < left.size(); ++k) {
    const size_t i = res.Index(left[k]);
    if (std::abs(res.x[i] - left[k]) < 1e-12) {
      res.phi[i] = yl[k][0];
      res.dphi[i] = yl[k][1];
    }
  }

  // Back to the center from each end of the domain (global error) and from
  // each end of the active interval (reversibility).
  double amp = 1.0;
  for (size_t i = 0; i <= static_cast<size_t>(n); ++i) {
    amp = std::max(amp, std::hypot(res.phi[i], res.dphi[i] / spec.h));
  }
  auto back = [&](double from) {
    const size_t i = res.Index(from);
    const auto y = Shoot(omega, spec.h, {res.phi[i], res.dphi[i]}, {res.x[i], spec.center},
                         options.tolerance, nullptr);
    return std::hypot(y.back()[0] - 1.0, y.back()[1] / spec.h);
  };
  const double domain_error = std::max(back(0.0), back(1.0));
  res.reversibility_error = spec.radius > 0
                                ? std::max(back(spec.center - spec.radius),
                                           back(spec.center + spec.radius))
                                : domain_error;
  res.global_error = std::max(domain_error, options.tolerance * amp);

  const double e0 = res.phi[0] * res.phi[0] + res.dphi[0] * res.dphi[0];
  const double e1 = res.phi[n] * res.phi[n] + res.dphi[n] * res.dphi[n];
  res.boundary0 = e0;
  res.boundary1 = e1;
  res.log_boundary0 = std::log(e0);
  res.log_boundary1 = std::log(e1);
  const double floor = 10 * res.global_error * std::max(1.0, spec.h);
  if (std::sqrt(e0) < floor || std::sqrt(e1) < floor) {
    throw ScaleOutOfReach("quasimode: boundary energy below the integrator's error for j = " +
                          std::to_string(spec.j));
  }

  if (spec.radius > 0) {
    const size_t a = res.Index(spec.center - spec.radius);
    const size_t b = res.Index(spec.center + spec.radius);
    res.extreme_left = res.phi[a] * res.phi[a] + res.dphi[a] * res.dphi[a];
    res.extreme_right = res.phi[b] * res.phi[b] + res.dphi[b] * res.dphi[b];
    std::vector<double> sq;
    for (size_t i = a; i <= b; ++i) sq.push_back(res.phi[i] * res.phi[i]);
    res.interior_mass = Trapezoid(sq, 1.0 / n);
    if (spec.pair) {
      const auto& p = *spec.pair;
      res.extreme_closed_form =
          std::exp(-p.decay_rate() * p.eps() * spec.h * 2 * spec.radius);
      for (size_t i = a; i <= b; ++i) {
        const double w = p.w(spec.h * (res.x[i] - spec.center));
        res.closed_form_error = std::max(res.closed_form_error, std::abs(res.phi[i] - w));
      }
      if (res.extreme_closed_form < 10 * res.global_error) {
        throw ScaleOutOfReach("quasimode: extreme energy below the integrator's error for j = " +
                              std::to_string(spec.j));
      }
    }
  }
  return res;
}

GronwallRatios EnergyGronwallCheck(const QuasimodeResult& phi,
                                   const Coefficient& omega, double x1, double x2) {
  GronwallRatios g;
  g.x1 = x1;
  g.x2 = x2;
  const size_t i1 = phi.Index(x1), i2 = phi.Index(x2);
  if (std::abs(phi.x[i1] - x1) > 1e-12 || std::abs(phi.x[i2] - x2) > 1e-12) {
    throw std::invalid_argument("gronwall: points must lie on the solution grid");
  }
  const double h = phi.h;
  const double lo = std::min(x1, x2), hi = std::max(x1, x2);
  const auto breaks = BreaksBetween(omega, lo, hi);

  auto E = [&](size_t i) {
    return kFourPi2 * h * h * phi.phi[i] * phi.phi[i] + phi.dphi[i] * phi.dphi[i];
  };
  auto Et = [&](size_t i) {
    return h * h * omega(phi.x[i]) * phi.phi[i] * phi.phi[i] + phi.dphi[i] * phi.dphi[i];
  };
  if (lo < hi) {
    g.e_exponent = h * PanelIntegral([&](double y) { return std::abs(kFourPi2 - omega(y)); },
                                     lo, hi, breaks, kPanel);
  }
  g.e_ratio = E(i2) / (E(i1) * std::exp(g.e_exponent));

  if (breaks.empty() || SmoothAcrossBreaks(omega)) {
    const double d = 1e-6 / std::max(1.0, h);
    auto log_slope = [&](double y) {
      return std::abs(omega(y + d) - omega(y - d)) / (2 * d * omega(y));
    };
    if (lo < hi) g.et_exponent = PanelIntegral(log_slope, lo, hi, breaks, kPanel);
    g.et_ratio = Et(i2) / (Et(i1) * std::exp(g.et_exponent));
    g.et_checked = true;
  }
  return g;
}

SweepResult BoundarySmallnessSweep(const coeff::CounterexampleParams& params,
                                   const coeff::PairMap& pairs,
                                   const Coefficient& omega,
                                   const SolveOptions& options, int jobs) {
  const size_t count = params.records.size();
  std::vector<SweepRow> rows(count);
  std::vector<std::string> failures(count);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t k = next++; k < count; k = next++) {
      const auto& rec = params.records[k];
      try {
        const auto spec = SpecFor(params, pairs, rec.j);
        const auto q = SolveQuasimode(omega, spec, options);
        SweepRow& row = rows[k];
        row.j = rec.j;
        row.h = rec.h;
        row.eps = rec.eps;
        row.interior_mass = q.interior_mass;
        row.extreme_energy = q.extreme_energy();
        row.extreme_closed_form = q.extreme_closed_form;
        row.boundary0 = q.boundary0;
        row.boundary1 = q.boundary1;
        row.log_boundary0 = q.log_boundary0;
        row.log_boundary1 = q.log_boundary1;
        const double c = spec.pair ? spec.pair->decay_rate() : 1.0;
        const double ehr = c * rec.eps * rec.h * rec.r;
        row.bound0 = kFourPi2 * rec.h * rec.h * std::exp(-0.8 * ehr);
        row.fifth_exponent = ehr / 5;
        row.gronwall_exponent = EnergyGronwallCheck(q, omega, 0.0, rec.m - rec.r / 2).e_exponent;
      } catch (const ScaleOutOfReach& e) {
        failures[k] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult out;
  for (size_t k = 0; k < count; ++k) {
    if (!failures[k].empty()) {
      out.truncated_at = params.records[k].j;
      out.truncation_reason = failures[k];
      break;
    }
    SweepRow row = rows[k];
    if (!out.rows.empty()) {
      const SweepRow& prev = out.rows.back();
      const double dl = std::log(row.h / prev.h);
      row.slope0 = (row.log_boundary0 - prev.log_boundary0) / dl;
      row.slope1 = (row.log_boundary1 - prev.log_boundary1) / dl;
    }
    out.rows.push_back(row);
  }
  return out;
}

nlohmann::json ToJson(const QuasimodeResult& r) {
  return {{"j", r.j},
          {"h", r.h},
          {"center", r.center},
          {"radius", r.radius},
          {"samples", r.x.size()},
          {"interior_mass", r.interior_mass},
          {"extreme_left", r.extreme_left},
          {"extreme_right", r.extreme_right},
          {"extreme_closed_form", r.extreme_closed_form},
          {"boundary0", r.boundary0},
          {"boundary1", r.boundary1},
          {"log_boundary0", r.log_boundary0},
          {"log_boundary1", r.log_boundary1},
          {"closed_form_error", r.closed_form_error},
          {"reversibility_error", r.reversibility_error},
          {"integrator",
           {{"method", "dormand-prince 5(4)"},
            {"steps", r.steps},
            {"tolerance", r.tolerance},
            {"global_error", r.global_error}}}};
}

std::string ProfileCsv(const QuasimodeResult& r) {
  std::ostringstream out;
  out.precision(17);
  out << "x,phi,dphi\n";
  for (size_t i = 0; i < r.x.size(); ++i) {
    out << r.x[i] << ',' << r.phi[i] << ',' << r.dphi[i] << '\n';
  }
  return out.str();
}

std::string SweepCsv(const SweepResult& s) {
  std::ostringstream out;
  out.precision(12);
  out << "j,h,eps,interior_mass,extreme_energy,extreme_closed_form,boundary0,"
         "boundary1,slope0,slope1,bound0,gronwall_exponent,fifth_exponent\n";
  for (const auto& r : s.rows) {
    out << r.j << ',' << r.h << ',' << r.eps << ',' << r.interior_mass << ','
        << r.extreme_energy << ',' << r.extreme_closed_form << ',' << r.boundary0
        << ',' << r.boundary1 << ',' << r.slope0 << ',' << r.slope1 << ','
        << r.bound0 << ',' << r.gronwall_exponent << ',' << r.fifth_exponent << '\n';
  }
  return out.str();
}

}  // namespace quasimodes
}  // namespace roughwave
