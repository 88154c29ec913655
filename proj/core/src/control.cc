#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "roughwave/errors.h"
#include "roughwave/fft.h"
#include "roughwave/observability.h"

namespace roughwave {
namespace observability {
namespace {

// Solves K z = q for K = tridiag(-1, 2, -1) / dx^2 on interior nodes 1..n-1.
std::vector<double> SolveLaplacian(const std::vector<double>& q, double dx) {
  const int n = static_cast<int>(q.size()) - 1;
  std::vector<double> z(n + 1, 0.0), c(n + 1, 0.0), d(n + 1, 0.0);
  const double s = dx * dx;
  for (int i = 1; i < n; ++i) {
    const double denom = 2.0 + (i > 1 ? c[i - 1] : 0.0);
    c[i] = -1.0 / denom;
    d[i] = (q[i] * s + (i > 1 ? d[i - 1] : 0.0)) / denom;
  }
  for (int i = n - 1; i >= 1; --i) z[i] = d[i] - c[i] * (i + 1 < n ? z[i + 1] : 0.0);
  return z;
}

struct State {
  std::vector<double> p;
  std::vector<double> q;
};

class ControlMap {
 public:
  ControlMap(const Coefficient& omega, int n, double cfl, double T) : n_(n) {
    dx_ = 1.0 / n;
    dt_ = wavesim::StableStep(omega, n, cfl, T);
    steps_ = static_cast<int>(std::lround(T / dt_));
    lambda_.assign(n + 1, 0.0);
    for (int i = 1; i < n; ++i) lambda_[i] = dt_ * dt_ / (omega(i * dx_) * dx_ * dx_);
  }

  int levels() const { return steps_ + 1; }
  double dt() const { return dt_; }
  double dx() const { return dx_; }

  // Terminal (y^L, (y^L - y^{L-1}) / dt) with y(t, 0) = f.
  State Forward(const std::vector<double>& f, const std::vector<double>& y0,
                const std::vector<double>& y1) const {
    std::vector<double> prev(y0), curr(n_ + 1, 0.0), next(n_ + 1, 0.0);
    prev[0] = f[0];
    prev[n_] = 0.0;
    for (int i = 1; i < n_; ++i) {
      curr[i] = prev[i] + dt_ * y1[i] +
                0.5 * lambda_[i] * (prev[i + 1] - 2 * prev[i] + prev[i - 1]);
    }
    curr[0] = f[1];
    for (int l = 1; l < steps_; ++l) {
      for (int i = 1; i < n_; ++i) {
        next[i] = 2 * curr[i] - prev[i] +
                  lambda_[i] * (curr[i + 1] - 2 * curr[i] + curr[i - 1]);
      }
      next[0] = f[l + 1];
      next[n_] = 0.0;
      std::swap(prev, curr);
      std::swap(curr, next);
    }
    State s{curr, std::vector<double>(n_ + 1, 0.0)};
    s.p[0] = s.p[n_] = 0.0;
    for (int i = 1; i < n_; ++i) s.q[i] = (curr[i] - prev[i]) / dt_;
    return s;
  }

  // Exact transpose of f -> Forward(f, 0, 0) in the Euclidean pairing.
  std::vector<double> Transpose(const State& s) const {
    std::vector<double> fbar(steps_ + 1, 0.0);
    std::vector<double> next(n_ + 1, 0.0), curr(n_ + 1, 0.0), prev(n_ + 1, 0.0);
    for (int i = 1; i < n_; ++i) {
      next[i] = s.p[i] + s.q[i] / dt_;
      curr[i] = -s.q[i] / dt_;
    }
    for (int l = steps_ - 1; l >= 1; --l) {
      for (int i = 1; i < n_; ++i) {
        const double b = next[i];
        curr[i] += (2 - 2 * lambda_[i]) * b;
        curr[i + 1] += lambda_[i] * b;
        curr[i - 1] += lambda_[i] * b;
        prev[i] -= b;
      }
      fbar[l] = curr[0];
      std::swap(next, curr);
      std::swap(curr, prev);
      std::fill(prev.begin(), prev.end(), 0.0);
    }
    for (int i = 1; i < n_; ++i) {
      const double b = next[i];
      curr[i] += (1 - lambda_[i]) * b;
      curr[i + 1] += 0.5 * lambda_[i] * b;
      curr[i - 1] += 0.5 * lambda_[i] * b;
    }
    fbar[1] = next[0];
    fbar[0] = curr[0];
    return fbar;
  }

 private:
  int n_;
  double dx_;
  double dt_;
  int steps_;
  std::vector<double> lambda_;
};

// Control metric F = dt Q^T W Q, Q the orthonormal DCT-II, W = (1 + xi^2)^-m.
class ControlMetric {
 public:
  ControlMetric(int levels, double dt, int m) : dt_(dt), m_(m) {
    const double N = levels;
    scale_.resize(levels);
    weight_.resize(levels);
    for (int k = 0; k < levels; ++k) {
      scale_[k] = std::sqrt((k == 0 ? 1.0 : 2.0) / N);
      const double xi = M_PI * k / (N * dt);
      weight_[k] = std::pow(1 + xi * xi, -m);
    }
  }

  double Dot(const std::vector<double>& a, const std::vector<double>& b) const {
    if (m_ == 0) return dt_ * Raw(a, b);
    const auto qa = Analysis(a), qb = Analysis(b);
    double s = 0.0;
    for (size_t k = 0; k < qa.size(); ++k) s += weight_[k] * qa[k] * qb[k];
    return dt_ * s;
  }

  std::vector<double> Inverse(std::vector<double> g) const {
    if (m_ == 0) {
      for (double& v : g) v /= dt_;
      return g;
    }
    auto c = Analysis(g);
    for (size_t k = 0; k < c.size(); ++k) c[k] /= weight_[k] * dt_;
    return Synthesis(c);
  }

 private:
  static double Raw(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  std::vector<double> Analysis(const std::vector<double>& x) const {
    auto X = Dct2(x);
    for (size_t k = 0; k < X.size(); ++k) X[k] *= 0.5 * scale_[k];
    return X;
  }
  std::vector<double> Synthesis(std::vector<double> c) const {
    c[0] *= scale_[0];
    for (size_t k = 1; k < c.size(); ++k) c[k] *= 0.5 * scale_[k];
    return Dct3(c);
  }

  double dt_;
  int m_;
  std::vector<double> scale_;
  std::vector<double> weight_;
};

// Terminal metric S = (dx I, dx K^-1).
State ApplyStateMetric(const State& s, double dx) {
  State out{s.p, SolveLaplacian(s.q, dx)};
  for (double& v : out.p) v *= dx;
  for (double& v : out.q) v *= dx;
  return out;
}

double StateNorm(const State& s, double dx) {
  double p2 = 0.0;
  for (size_t i = 1; i + 1 < s.p.size(); ++i) p2 += s.p[i] * s.p[i];
  return dx * p2 + NegativeNormSquared(s.q, dx);
}

}  // namespace

std::vector<double> ControlForward(const Coefficient& omega, int resolution, double cfl,
                                   double T, const std::vector<double>& f) {
  const ControlMap A(omega, resolution, cfl, T);
  if (static_cast<int>(f.size()) != A.levels()) {
    throw std::invalid_argument("control: f needs one value per time level");
  }
  const std::vector<double> zeros(resolution + 1, 0.0);
  const State s = A.Forward(f, zeros, zeros);
  std::vector<double> out(s.p);
  out.insert(out.end(), s.q.begin(), s.q.end());
  return out;
}

std::vector<double> ControlTranspose(const Coefficient& omega, int resolution, double cfl,
                                     double T, const std::vector<double>& state) {
  const ControlMap A(omega, resolution, cfl, T);
  const size_t half = resolution + 1;
  if (state.size() != 2 * half) throw std::invalid_argument("control: state length must be 2(n + 1)");
  State s{{state.begin(), state.begin() + half}, {state.begin() + half, state.end()}};
  return A.Transpose(s);
}

int ControlLevels(const Coefficient& omega, int resolution, double cfl, double T) {
  return ControlMap(omega, resolution, cfl, T).levels();
}

double NegativeNormSquared(const std::vector<double>& q, double dx) {
  const auto z = SolveLaplacian(q, dx);
  double s = 0.0;
  for (size_t i = 1; i + 1 < q.size(); ++i) s += q[i] * z[i];
  return dx * s;
}

ControlResult HumControl(const Coefficient& omega, const std::vector<double>& y0,
                         const std::vector<double>& y1, double T,
                         const ControlOptions& options) {
  const int n = options.resolution;
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("control: resolution must be a power of two >= 8");
  }
  if (static_cast<int>(y0.size()) != n + 1 || static_cast<int>(y1.size()) != n + 1) {
    throw std::invalid_argument("control: data length must be resolution + 1");
  }
  if (options.m < 0) throw std::invalid_argument("control: m must be >= 0");
  const ControlMap A(omega, n, options.cfl, T);
  const ControlMetric F(A.levels(), A.dt(), options.m);
  const double dx = A.dx();

  ControlResult out;
  out.y0 = y0;
  out.y1 = y1;
  out.T = T;
  out.m = options.m;
  out.dt = A.dt();
  out.admissible = T > 2 * coeff::ComputeTravelTime(omega).value;
  out.f.assign(A.levels(), 0.0);
  {
    double l2 = 0.0;
    for (int i = 1; i < n; ++i) l2 += y0[i] * y0[i];
    out.initial_norm = dx * l2 + NegativeNormSquared(y1, dx);
  }
  if (!(out.initial_norm > 0)) {
    out.controlled = true;
    return out;
  }

  const std::vector<double> zero_f(A.levels(), 0.0);
  State r = A.Forward(zero_f, y0, y1);
  for (auto* v : {&r.p, &r.q}) {
    for (double& x : *v) x = -x;
  }
  auto adjoint = [&](const State& s) { return F.Inverse(A.Transpose(ApplyStateMetric(s, dx))); };
  std::vector<double> s = adjoint(r), p = s;
  double gamma = F.Dot(s, s);
  double res = StateNorm(r, dx) / out.initial_norm;
  out.residual_history.push_back(res);
  out.cost_history.push_back(0.0);
  const std::vector<double> zeros(n + 1, 0.0);
  while (res > options.tolerance && out.iterations < options.max_iterations && gamma > 0) {
    const State q = A.Forward(p, zeros, zeros);
    const double qq = StateNorm(q, dx);
    if (!(qq > 0)) break;
    const double alpha = gamma / qq;
    for (size_t l = 0; l < p.size(); ++l) out.f[l] += alpha * p[l];
    for (size_t i = 0; i < r.p.size(); ++i) {
      r.p[i] -= alpha * q.p[i];
      r.q[i] -= alpha * q.q[i];
    }
    s = adjoint(r);
    const double gamma_next = F.Dot(s, s);
    for (size_t l = 0; l < p.size(); ++l) p[l] = s[l] + gamma_next / gamma * p[l];
    gamma = gamma_next;
    ++out.iterations;
    res = StateNorm(r, dx) / out.initial_norm;
    out.residual_history.push_back(res);
    out.cost_history.push_back(F.Dot(out.f, out.f) / out.initial_norm);
  }

  // Terminal state recomputed from scratch rather than taken from the recursion.
  const State fin = A.Forward(out.f, y0, y1);
  double l2 = 0.0;
  for (int i = 1; i < n; ++i) l2 += fin.p[i] * fin.p[i];
  out.terminal_l2 = std::sqrt(dx * l2);
  out.terminal_hm1 = std::sqrt(NegativeNormSquared(fin.q, dx));
  out.terminal_relative_energy = StateNorm(fin, dx) / out.initial_norm;
  out.controlled = out.terminal_relative_energy <= options.tolerance;
  double f2 = 0.0;
  for (double v : out.f) f2 += v * v;
  out.control_l2 = std::sqrt(A.dt() * f2);
  out.control_norm = wavesim::TraceDualNorm(out.f, A.dt(), options.m);
  out.cost = F.Dot(out.f, out.f) / out.initial_norm;
  return out;
}

nlohmann::json ToJson(const ControlResult& r) {
  return {{"T", r.T},
          {"m", r.m},
          {"dt", r.dt},
          {"admissible", r.admissible},
          {"iterations", r.iterations},
          {"controlled", r.controlled},
          {"initial_norm", r.initial_norm},
          {"terminal_l2", r.terminal_l2},
          {"terminal_hm1", r.terminal_hm1},
          {"terminal_relative_energy", r.terminal_relative_energy},
          {"control_l2", r.control_l2},
          {"control_norm", r.control_norm},
          {"cost", r.cost}};
}

std::string HistoryCsv(const ControlResult& r) {
  std::ostringstream out;
  out.precision(12);
  out << "iteration,residual,cost\n";
  for (size_t k = 0; k < r.residual_history.size(); ++k) {
    out << k << ',' << r.residual_history[k] << ',' << r.cost_history[k] << '\n';
  }
  return out.str();
}

}  // namespace observability
}  // namespace roughwave
