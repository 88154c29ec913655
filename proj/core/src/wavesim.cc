#include "roughwave/wavesim.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "roughwave/errors.h"
#include "roughwave/fft.h"
#include "roughwave/numerics.h"

namespace roughwave {
namespace wavesim {
namespace {

constexpr double kPi = std::numbers::pi;

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

void CheckResolution(int n) {
  if (!IsPowerOfTwo(n) || n < 8) {
    throw std::invalid_argument("wavesim: resolution must be a power of two >= 8");
  }
}

double Trace0(const std::vector<double>& u, double dx) {
  return (-11 * u[0] + 18 * u[1] - 9 * u[2] + 2 * u[3]) / (6 * dx);
}

double Trace1(const std::vector<double>& u, double dx) {
  const size_t n = u.size() - 1;
  return (11 * u[n] - 18 * u[n - 1] + 9 * u[n - 2] - 2 * u[n - 3]) / (6 * dx);
}

void Advance(const std::vector<double>& lambda, const std::vector<double>& prev,
             const std::vector<double>& curr, std::vector<double>& next) {
  const size_t n = curr.size() - 1;
  for (size_t i = 1; i < n; ++i) {
    next[i] = 2 * curr[i] - prev[i] +
              lambda[i] * (curr[i + 1] - 2 * curr[i] + curr[i - 1]);
  }
}

// Discrete energy between consecutive levels b (earlier) and a (later).
double StaggeredEnergy(const std::vector<double>& omega,
                       const std::vector<double>& b,
                       const std::vector<double>& a, double dx, double dt) {
  const size_t n = a.size() - 1;
  double kinetic = 0.0, potential = 0.0;
  for (size_t i = 1; i < n; ++i) {
    const double v = (a[i] - b[i]) / dt;
    kinetic += omega[i] * v * v;
  }
  for (size_t i = 0; i < n; ++i) {
    potential += (a[i + 1] - a[i]) * (b[i + 1] - b[i]);
  }
  return 0.5 * kinetic * dx + 0.5 * potential / dx;
}

double Binomial(int k, int i) {
  double c = 1.0;
  for (int s = 1; s <= i; ++s) c = c * (k - i + s) / s;
  return c;
}

// Forward difference d_+^k over levels[first .. first + k].
std::vector<double> ForwardDifference(const std::deque<std::vector<double>>& levels,
                                      size_t first, int k, double dt) {
  std::vector<double> out(levels[first].size(), 0.0);
  const double scale = std::pow(dt, -k);
  for (int i = 0; i <= k; ++i) {
    const double c = ((k - i) % 2 ? -1.0 : 1.0) * Binomial(k, i) * scale;
    const auto& u = levels[first + i];
    for (size_t x = 0; x < out.size(); ++x) out[x] += c * u[x];
  }
  return out;
}

// Cubic Lagrange interpolation of uniformly spaced samples.
double Interpolate(const std::vector<double>& v, double step, double t) {
  const double s = t / step;
  int i = static_cast<int>(std::floor(s)) - 1;
  i = std::clamp(i, 0, static_cast<int>(v.size()) - 4);
  const double u = s - i;
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) w *= (u - b) / (a - b);
    }
    out += w * v[i + a];
  }
  return out;
}

}  // namespace

double WaveTrajectory::EnergyDrift(int k) const {
  const auto& e = energy.at(k);
  if (e.empty() || e.front() == 0.0) return 0.0;
  const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
  return (*hi - *lo) / std::abs(e.front());
}

double StableStep(const Coefficient& omega, int resolution, double cfl, double T) {
  const double dx = 1.0 / resolution;
  const double limit = cfl * dx * std::sqrt(omega.lower());
  const double steps = std::ceil(T / limit - 1e-12);
  return T / steps;
}

std::vector<double> SampleNodes(const Profile& f, int n) {
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = f(static_cast<double>(i) / n);
  return v;
}

std::pair<std::vector<double>, std::vector<double>> StepLevels(
    const std::vector<double>& omega_nodes, double dx, double dt,
    std::vector<double> prev, std::vector<double> curr, int steps) {
  std::vector<double> lambda(omega_nodes.size());
  for (size_t i = 0; i < lambda.size(); ++i) {
    lambda[i] = dt * dt / (omega_nodes[i] * dx * dx);
  }
  std::vector<double> next(curr.size(), 0.0);
  for (int s = 0; s < steps; ++s) {
    next.front() = curr.front();
    next.back() = curr.back();
    Advance(lambda, prev, curr, next);
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  return {prev, curr};
}

WaveTrajectory EvolveNodal(const Coefficient& omega,
                           const std::vector<double>& u0_in,
                           const std::vector<double>& u1_in, double T,
                           const EvolveOptions& options) {
  const int n = options.resolution;
  CheckResolution(n);
  if (!(T > 0)) throw std::invalid_argument("wavesim: T must be positive");
  if (!(options.cfl > 0 && options.cfl <= 0.9)) {
    throw std::invalid_argument("wavesim: CFL number must lie in ]0, 0.9]");
  }
  if (static_cast<int>(u0_in.size()) != n + 1 || static_cast<int>(u1_in.size()) != n + 1) {
    throw std::invalid_argument("wavesim: initial data length mismatch");
  }
  omega.CheckHyperbolicity(std::min(100000, 16 * n));

  WaveTrajectory tr;
  tr.n = n;
  tr.dx = 1.0 / n;
  tr.T = T;
  if (options.steps > 0) {
    tr.steps = options.steps;
    tr.dt = T / tr.steps;
  } else {
    tr.dt = StableStep(omega, n, options.cfl, T);
    tr.steps = static_cast<int>(std::lround(T / tr.dt));
  }
  tr.cfl = tr.dt / (tr.dx * std::sqrt(omega.lower()));
  if (tr.cfl > 1.0) throw std::invalid_argument("wavesim: CFL condition violated");
  tr.omega = SampleNodes([&omega](double x) { return omega(x); }, n);
  tr.probe_nodes = options.probe_nodes;
  tr.probes.assign(options.probe_nodes.size(), {});

  const double dx = tr.dx, dt = tr.dt;
  std::vector<double> lambda(n + 1);
  for (int i = 0; i <= n; ++i) lambda[i] = dt * dt / (tr.omega[i] * dx * dx);

  std::vector<double> u0(u0_in), u1(n + 1, 0.0);
  u0.front() = u0.back() = 0.0;
  for (int i = 1; i < n; ++i) {
    u1[i] = u0[i] + dt * u1_in[i] +
            0.5 * lambda[i] * (u0[i + 1] - 2 * u0[i] + u0[i - 1]);
  }

  const int K = options.energy_orders;
  tr.energy.assign(K + 1, {});
  std::deque<std::vector<double>> window;
  auto record = [&](const std::vector<double>& u, int level) {
    tr.t.push_back(level * dt);
    tr.trace0.push_back(Trace0(u, dx));
    tr.trace1.push_back(Trace1(u, dx));
    tr.max_boundary_abs = std::max({tr.max_boundary_abs, std::abs(u.front()), std::abs(u.back())});
    for (size_t p = 0; p < options.probe_nodes.size(); ++p) {
      tr.probes[p].push_back(u.at(options.probe_nodes[p]));
    }
    if (options.snapshot_stride > 0 && level % options.snapshot_stride == 0) {
      tr.snapshots.push_back(u);
      tr.snapshot_times.push_back(level * dt);
    }
    window.push_back(u);
    if (static_cast<int>(window.size()) > K + 2) window.pop_front();
    // Newest level index is `level`; E_k at level l needs l .. l + k + 1.
    for (int k = 0; k <= K; ++k) {
      const int l = level - (k + 1);
      if (l < 0) continue;
      const size_t first = window.size() - (k + 2);
      const auto b = ForwardDifference(window, first, k, dt);
      const auto a = ForwardDifference(window, first + 1, k, dt);
      tr.energy[k].push_back(StaggeredEnergy(tr.omega, b, a, dx, dt));
    }
  };

  record(u0, 0);
  record(u1, 1);
  std::vector<double> prev(u0), curr(u1), next(n + 1, 0.0);
  for (int s = 2; s <= tr.steps; ++s) {
    Advance(lambda, prev, curr, next);
    std::swap(prev, curr);
    std::swap(curr, next);
    record(curr, s);
  }
  tr.u_prev = prev;
  tr.u_final = curr;
  return tr;
}

WaveTrajectory Evolve(const Coefficient& omega, const Profile& u0,
                      const Profile& u1, double T, const EvolveOptions& options) {
  CheckResolution(options.resolution);
  return EvolveNodal(omega, SampleNodes(u0, options.resolution),
                     SampleNodes(u1, options.resolution), T, options);
}

double SobolevInfNorm(const std::vector<double>& signal, double dt, int k) {
  double total = 0.0;
  std::vector<double> d(signal);
  for (int order = 0; order <= k; ++order) {
    double sup = 0.0;
    for (double v : d) sup = std::max(sup, std::abs(v));
    total += sup;
    if (order < k) d = Differentiate(d, dt);
  }
  return total;
}

InhomogeneousResult EvolveInhomogeneous(const Coefficient& omega,
                                        const BoundaryForcing& forcing,
                                        double T, const EvolveOptions& options) {
  const int n = options.resolution;
  CheckResolution(n);
  if (!(T > 0)) throw std::invalid_argument("wavesim: T must be positive");
  if (!(options.cfl > 0 && options.cfl <= 0.9)) {
    throw std::invalid_argument("wavesim: CFL number must lie in ]0, 0.9]");
  }
  omega.CheckHyperbolicity(std::min(100000, 16 * n));

  InhomogeneousResult res;
  WaveTrajectory& tr = res.trajectory;
  tr.n = n;
  tr.dx = 1.0 / n;
  tr.T = T;
  tr.dt = options.steps > 0 ? T / options.steps : StableStep(omega, n, options.cfl, T);
  tr.steps = static_cast<int>(std::lround(T / tr.dt));
  tr.cfl = tr.dt / (tr.dx * std::sqrt(omega.lower()));
  if (tr.cfl > 1.0) throw std::invalid_argument("wavesim: CFL condition violated");
  tr.omega = SampleNodes([&omega](double x) { return omega(x); }, n);
  tr.probe_nodes = options.probe_nodes;
  tr.probes.assign(options.probe_nodes.size(), {});
  const double dx = tr.dx, dt = tr.dt;

  std::vector<double> lambda(n + 1);
  for (int i = 0; i <= n; ++i) lambda[i] = dt * dt / (tr.omega[i] * dx * dx);

  std::vector<double> fs, gs;
  for (int s = 0; s <= tr.steps; ++s) {
    fs.push_back(forcing.f ? forcing.f(s * dt) : 0.0);
    gs.push_back(forcing.g ? forcing.g(s * dt) : 0.0);
  }
  res.incompatible_start = fs[0] != 0.0 || gs[0] != 0.0;

  std::vector<double> prev(n + 1, 0.0), curr(n + 1, 0.0), next(n + 1, 0.0);
  prev.front() = fs[0];
  prev.back() = gs[0];
  for (int i = 1; i < n; ++i) {
    curr[i] = 0.5 * lambda[i] * (prev[i + 1] - 2 * prev[i] + prev[i - 1]);
  }
  curr.front() = fs[1];
  curr.back() = gs[1];

  auto record = [&](const std::vector<double>& u, int level) {
    tr.t.push_back(level * dt);
    tr.trace0.push_back(Trace0(u, dx));
    tr.trace1.push_back(Trace1(u, dx));
    for (size_t p = 0; p < options.probe_nodes.size(); ++p) {
      tr.probes[p].push_back(u.at(options.probe_nodes[p]));
    }
    if (options.snapshot_stride > 0 && level % options.snapshot_stride == 0) {
      tr.snapshots.push_back(u);
      tr.snapshot_times.push_back(level * dt);
    }
  };
  auto slab = [&](const std::vector<double>& b, const std::vector<double>& a) {
    double kinetic = 0.0, grad = 0.0;
    for (int i = 1; i < n; ++i) {
      const double v = (a[i] - b[i]) / dt;
      kinetic += tr.omega[i] * v * v;
    }
    for (int i = 0; i < n; ++i) {
      const double ga = (a[i + 1] - a[i]) / dx, gb = (b[i + 1] - b[i]) / dx;
      grad += 0.5 * (ga * ga + gb * gb);
    }
    return (kinetic + grad) * dx * dt;
  };

  record(prev, 0);
  record(curr, 1);
  res.interior_energy += slab(prev, curr);
  for (int s = 2; s <= tr.steps; ++s) {
    Advance(lambda, prev, curr, next);
    next.front() = fs[s];
    next.back() = gs[s];
    res.interior_energy += slab(curr, next);
    std::swap(prev, curr);
    std::swap(curr, next);
    record(curr, s);
  }
  tr.u_prev = prev;
  tr.u_final = curr;

  std::vector<double> flux(tr.trace0.size());
  for (size_t l = 0; l < flux.size(); ++l) {
    flux[l] = tr.trace0[l] * tr.trace0[l] + tr.trace1[l] * tr.trace1[l];
  }
  res.boundary_flux = Trapezoid(flux, dt);
  const double w2 = std::pow(SobolevInfNorm(fs, dt, 2), 2) + std::pow(SobolevInfNorm(gs, dt, 2), 2);
  const double w3 = std::pow(SobolevInfNorm(fs, dt, 3), 2) + std::pow(SobolevInfNorm(gs, dt, 3), 2);
  res.interior_ratio = w2 > 0 ? res.interior_energy / (omega.upper() * w2) : 0.0;
  res.flux_ratio = w3 > 0 ? res.boundary_flux / (omega.upper() * w3) : 0.0;
  return res;
}

double SidewiseResult::At(int i, double t) const {
  return Interpolate(fields.at(i), dt, t - t0);
}

SidewiseResult SidewiseEvolve(const Coefficient& omega,
                              const std::vector<double>& u_slice,
                              const std::vector<double>& ux_slice, double dt_in,
                              double x0, double span, int x_steps,
                              int energy_orders) {
  if (u_slice.size() != ux_slice.size() || u_slice.size() < 8) {
    throw std::invalid_argument("sidewise: slice lengths mismatch");
  }
  if (x_steps < 1 || span == 0.0) throw std::invalid_argument("sidewise: empty span");
  SidewiseResult r;
  r.dx = span / x_steps;
  const double adx = std::abs(r.dx);
  const double T_in = dt_in * (u_slice.size() - 1);
  // Transverse CFL: |dx| sqrt(omega^*) <= 0.9 dt.
  const int nt = static_cast<int>(std::floor(T_in / (adx * std::sqrt(omega.upper()) / 0.9)));
  if (nt - 2 * x_steps < 4) {
    throw std::invalid_argument("sidewise: span exceeds the domain of dependence of the slice");
  }
  r.dt = T_in / nt;
  r.t0 = 0.0;

  std::vector<double> u0(nt + 1), ux0(nt + 1);
  for (int l = 0; l <= nt; ++l) {
    u0[l] = Interpolate(u_slice, dt_in, l * r.dt);
    ux0[l] = Interpolate(ux_slice, dt_in, l * r.dt);
  }
  const double q = r.dx * r.dx / (r.dt * r.dt);
  r.fields.push_back(u0);
  r.first_valid.push_back(0);
  r.last_valid.push_back(nt);
  r.x.push_back(x0);
  std::vector<double> u1(nt + 1, 0.0);
  const double w0 = omega(x0);
  for (int l = 1; l < nt; ++l) {
    u1[l] = u0[l] + r.dx * ux0[l] + 0.5 * q * w0 * (u0[l + 1] - 2 * u0[l] + u0[l - 1]);
  }
  r.fields.push_back(u1);
  r.first_valid.push_back(1);
  r.last_valid.push_back(nt - 1);
  r.x.push_back(x0 + r.dx);
  for (int i = 1; i < x_steps; ++i) {
    const auto& c = r.fields[i];
    const auto& p = r.fields[i - 1];
    const double wi = omega(r.x[i]);
    std::vector<double> next(nt + 1, 0.0);
    for (int l = i + 1; l <= nt - i - 1; ++l) {
      next[l] = 2 * c[l] - p[l] + q * wi * (c[l + 1] - 2 * c[l] + c[l - 1]);
    }
    r.fields.push_back(std::move(next));
    r.first_valid.push_back(i + 1);
    r.last_valid.push_back(nt - i - 1);
    r.x.push_back(x0 + (i + 1) * r.dx);
  }

  r.F.assign(energy_orders + 1, std::vector<double>(r.fields.size(), 0.0));
  for (size_t i = 0; i + 1 < r.fields.size(); ++i) {
    const int a = r.first_valid[i + 1], b = r.last_valid[i + 1];
    std::vector<double> u(r.fields[i].begin() + a, r.fields[i].begin() + b + 1);
    std::vector<double> ux(u.size());
    for (int l = a; l <= b; ++l) {
      ux[l - a] = i == 0 ? ux0[l]
                         : (r.fields[i + 1][l] - r.fields[i - 1][l]) / (2 * r.dx);
    }
    const double wi = omega(r.x[i]);
    std::vector<double> dt_u = Differentiate(u, r.dt);
    for (int k = 0; k <= energy_orders; ++k) {
      std::vector<double> integrand(u.size());
      for (size_t l = 0; l < u.size(); ++l) {
        integrand[l] = wi * dt_u[l] * dt_u[l] + ux[l] * ux[l];
      }
      r.F[k][i] = 0.5 * Trapezoid(integrand, r.dt);
      dt_u = Differentiate(dt_u, r.dt);
      ux = Differentiate(ux, r.dt);
    }
  }
  return r;
}

std::vector<double> ApplyDOmega(const std::vector<double>& f,
                                const Coefficient& omega, int m) {
  if (m < 0) throw std::invalid_argument("D_omega: power must be >= 0");
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 4) throw std::invalid_argument("D_omega: too few samples");
  const double dx = 1.0 / n;
  std::vector<double> w = SampleNodes([&omega](double x) { return omega(x); }, n);
  std::vector<double> g(f), next(f.size());
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  for (int s = 0; s < m; ++s) {
    for (int i = 0; i <= n; ++i) {
      const double left = i > 0 ? g[i - 1] : 2 * g[0] - g[1];
      const double right = i < n ? g[i + 1] : 2 * g[n] - g[n - 1];
      next[i] = (right - 2 * g[i] + left) / (dx * dx * w[i]);
    }
    // Odd reflection about the end value: f(-dx) = 2 f(0) - f(dx).
    std::swap(g, next);
  }
  if (m > 0) {
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    const double noise = std::pow(4.0 / (dx * dx * omega.lower()), m) * 1e-16 * fmax;
    if (noise > 1e-3 * gmax) {
      throw NumericError("D_omega: power too large for the resolution");
    }
  }
  return g;
}

namespace {

double WeightedTraceNorm(const std::vector<double>& trace, double dt, double beta) {
  const size_t n = trace.size();
  if (n < 8) throw std::invalid_argument("trace norm: signal too short");
  const double T = dt * (n - 1);
  const double edge = 0.1 * T;
  std::vector<double> x(n);
  for (size_t l = 0; l < n; ++l) {
    const double t = l * dt;
    const double d = std::min(t, T - t);
    const double w = d >= edge ? 1.0 : 0.5 * (1 - std::cos(kPi * d / edge));
    x[l] = w * trace[l];
  }
  size_t len = 1;
  while (len < n) len <<= 1;
  len *= 4;
  x.resize(len, 0.0);
  const auto X = RealFft(x);
  double sum = 0.0;
  for (size_t k = 0; k < X.size(); ++k) {
    const double xi = 2 * kPi * k / (len * dt);
    const double mult = (k == 0 || (len % 2 == 0 && k == len / 2)) ? 1.0 : 2.0;
    sum += mult * std::pow(1 + xi * xi, beta) * std::norm(X[k]);
  }
  return std::sqrt(sum * dt / len);
}

}  // namespace

double TraceSobolevNorm(const std::vector<double>& trace, double dt, double beta) {
  if (beta < 0) throw std::invalid_argument("trace norm: beta must be >= 0");
  return WeightedTraceNorm(trace, dt, beta);
}

double TraceDualNorm(const std::vector<double>& trace, double dt, double m) {
  if (m < 0) throw std::invalid_argument("dual trace norm: m must be >= 0");
  return WeightedTraceNorm(trace, dt, -m);
}

nlohmann::json Summary(const WaveTrajectory& tr) {
  nlohmann::json j;
  j["n"] = tr.n;
  j["dx"] = tr.dx;
  j["dt"] = tr.dt;
  j["T"] = tr.T;
  j["steps"] = tr.steps;
  j["cfl"] = tr.cfl;
  j["scheme"] = "leapfrog, order 2, nodal mass";
  j["max_boundary_abs"] = tr.max_boundary_abs;
  for (size_t k = 0; k < tr.energy.size(); ++k) {
    j["energy"].push_back({{"k", k},
                           {"initial", tr.energy[k].empty() ? 0.0 : tr.energy[k].front()},
                           {"drift", tr.EnergyDrift(static_cast<int>(k))}});
  }
  return j;
}

std::string TracesCsv(const WaveTrajectory& tr) {
  std::ostringstream out;
  out.precision(17);
  out << "t,ux0,ux1\n";
  for (size_t l = 0; l < tr.t.size(); ++l) {
    out << tr.t[l] << ',' << tr.trace0[l] << ',' << tr.trace1[l] << '\n';
  }
  return out.str();
}

std::string EnergyCsv(const WaveTrajectory& tr) {
  std::ostringstream out;
  out.precision(17);
  out << "t";
  for (size_t k = 0; k < tr.energy.size(); ++k) out << ",E" << k;
  out << '\n';
  const size_t rows = tr.energy.empty() ? 0 : tr.energy.back().size();
  for (size_t l = 0; l < rows; ++l) {
    out << (l + 0.5) * tr.dt;
    for (const auto& e : tr.energy) out << ',' << e[l];
    out << '\n';
  }
  return out.str();
}

std::string SnapshotBytes(const WaveTrajectory& tr) {
  std::string out;
  auto put = [&out](const void* p, size_t bytes) {
    out.append(static_cast<const char*>(p), bytes);
  };
  const std::int32_t n = tr.n;
  const std::int32_t count = static_cast<std::int32_t>(tr.snapshots.size());
  put(&n, sizeof n);
  put(&count, sizeof count);
  put(&tr.T, sizeof tr.T);
  for (const auto& s : tr.snapshots) put(s.data(), s.size() * sizeof(double));
  return out;
}

void WriteSnapshots(const WaveTrajectory& tr, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << SnapshotBytes(tr);
}

}  // namespace wavesim
}  // namespace roughwave
