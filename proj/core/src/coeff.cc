#include "roughwave/coeff.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "roughwave/errors.h"
#include "roughwave/numerics.h"
#include "roughwave/sequences.h"

namespace roughwave {
namespace coeff {
namespace {

constexpr double kPi = std::numbers::pi;

const std::pair<Kind, const char*> kKindNames[] = {
    {Kind::kConstant, "constant"},
    {Kind::kLipschitz, "lipschitz"},
    {Kind::kBvStep, "bv-step"},
    {Kind::kHoelder, "hoelder"},
    {Kind::kLogLipschitz, "log-lipschitz"},
    {Kind::kWeierstrassZygmund, "weierstrass-zygmund"},
    {Kind::kCounterexamplePsi, "counterexample-psi"},
    {Kind::kCounterexampleLambda, "counterexample-lambda"},
    {Kind::kCustom, "custom"},
};

nlohmann::json ParamsJson(const std::string& family, const BaselineParams& p) {
  return {{"family", family},       {"value", p.value},
          {"base", p.base},         {"amplitude", p.amplitude},
          {"center", p.center},     {"exponent", p.exponent},
          {"n_max", p.n_max},       {"weight_power", p.weight_power},
          {"frequency", p.frequency}, {"phase", p.phase}};
}

BaselineParams ParamsFromJson(const nlohmann::json& j) {
  BaselineParams p;
  p.value = j.value("value", p.value);
  p.base = j.value("base", p.base);
  p.amplitude = j.value("amplitude", p.amplitude);
  p.center = j.value("center", p.center);
  p.exponent = j.value("exponent", p.exponent);
  p.n_max = j.value("n_max", p.n_max);
  p.weight_power = j.value("weight_power", p.weight_power);
  p.frequency = j.value("frequency", p.frequency);
  p.phase = j.value("phase", p.phase);
  return p;
}

// Lacunary sum base + amplitude * sum 2^-n n^q cos(2^{n+1} pi x).
Coefficient Lacunary(const std::string& family, Kind kind,
                     const BaselineParams& p) {
  if (p.n_max < 1) throw std::invalid_argument("lacunary: n_max must be >= 1");
  std::vector<double> weights;
  double total = 0.0;
  for (int n = 1; n <= p.n_max; ++n) {
    weights.push_back(std::ldexp(1.0, -n) * std::pow(n, p.weight_power));
    total += weights.back();
  }
  const double spread = std::abs(p.amplitude) * total;
  const double lower = p.base - spread, upper = p.base + spread;
  if (!(lower > 0)) {
    throw std::invalid_argument(family + ": base too small for hyperbolicity");
  }
  auto eval = [p, weights](double x) {
    double s = 0.0;
    for (size_t k = 0; k < weights.size(); ++k) {
      s += weights[k] * std::cos(std::ldexp(kPi, static_cast<int>(k) + 2) * x);
    }
    return p.base + p.amplitude * s;
  };
  return Coefficient(kind, eval, lower, upper, ParamsJson(family, p));
}

}  // namespace

std::string ToString(Kind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "custom";
}

Kind KindFromString(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  throw std::invalid_argument("unknown coefficient kind: " + name);
}

Coefficient::Coefficient(Kind kind, Evaluator evaluator, double lower,
                         double upper, nlohmann::json provenance, double length,
                         std::vector<double> breakpoints)
    : kind_(kind),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      lower_(lower),
      upper_(upper),
      length_(length),
      provenance_(std::make_shared<const nlohmann::json>(std::move(provenance))),
      breakpoints_(std::make_shared<const std::vector<double>>(
          std::move(breakpoints))) {
  if (!(lower > 0) || !(upper >= lower)) {
    throw std::domain_error("coefficient: need 0 < lower <= upper");
  }
  if (!(length > 0)) throw std::domain_error("coefficient: length must be > 0");
}

double Coefficient::operator()(double x) const {
  return (*evaluator_)(std::clamp(x, 0.0, length_));
}

std::vector<double> Coefficient::Sample(int n) const {
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = (*this)(length_ * i / n);
  return out;
}

void Coefficient::CheckHyperbolicity(int samples) const {
  const double slack = 1e-12 * upper_;
  for (int i = 0; i <= samples; ++i) {
    const double v = (*this)(length_ * i / samples);
    if (!(v >= lower_ - slack && v <= upper_ + slack)) {
      std::ostringstream msg;
      msg << "coefficient: value " << v << " at x = " << length_ * i / samples
          << " outside [" << lower_ << ", " << upper_ << "]";
      throw std::domain_error(msg.str());
    }
  }
}

Coefficient MakeBaseline(const std::string& family, const BaselineParams& p) {
  const nlohmann::json prov = ParamsJson(family, p);
  if (family == "constant") {
    if (!(p.value > 0)) throw std::invalid_argument("constant: value must be > 0");
    const double v = p.value;
    return Coefficient(Kind::kConstant, [v](double) { return v; }, v, v, prov);
  }
  if (family == "smooth") {
    const double lo = p.base - std::abs(p.amplitude);
    if (!(lo > 0)) throw std::invalid_argument("smooth: base too small");
    return Coefficient(
        Kind::kLipschitz,
        [p](double x) {
          return p.base + p.amplitude * std::cos(2 * kPi * p.frequency * x + p.phase);
        },
        lo, p.base + std::abs(p.amplitude), prov);
  }
  const double reach = std::max(p.center, 1 - p.center);
  if (family == "lipschitz" || family == "hoelder" || family == "log-lipschitz") {
    double peak = 0.0;
    std::function<double(double)> shape;
    Kind kind = Kind::kLipschitz;
    if (family == "lipschitz") {
      shape = [](double s) { return s; };
    } else if (family == "hoelder") {
      if (!(p.exponent > 0 && p.exponent < 1)) {
        throw std::invalid_argument("hoelder: exponent outside ]0,1[");
      }
      const double a = p.exponent;
      shape = [a](double s) { return std::pow(s, a); };
      kind = Kind::kHoelder;
    } else {
      shape = [](double s) { return s > 0 ? s * std::log1p(1 / s) : 0.0; };
      kind = Kind::kLogLipschitz;
    }
    peak = shape(reach);
    const double lo = p.base + std::min(0.0, p.amplitude * peak);
    const double hi = p.base + std::max(0.0, p.amplitude * peak);
    if (!(lo > 0)) throw std::invalid_argument(family + ": base too small");
    return Coefficient(
        kind, [p, shape](double x) { return p.base + p.amplitude * shape(std::abs(x - p.center)); },
        lo, hi, prov, 1.0, {p.center});
  }
  if (family == "bv-step") {
    const double lo = p.base + std::min(0.0, p.amplitude);
    const double hi = p.base + std::max(0.0, p.amplitude);
    if (!(lo > 0)) throw std::invalid_argument("bv-step: base too small");
    return Coefficient(
        Kind::kBvStep,
        [p](double x) { return x > p.center ? p.base + p.amplitude : p.base; }, lo,
        hi, prov, 1.0, {p.center});
  }
  if (family == "weierstrass") {
    BaselineParams q = p;
    q.weight_power = 0.0;
    return Lacunary(family, Kind::kWeierstrassZygmund, q);
  }
  if (family == "lacunary") return Lacunary(family, Kind::kLogLipschitz, p);
  throw std::invalid_argument("unknown coefficient family: " + family);
}

NormalForm ReduceToNormalForm(const Coefficient& rho, const Coefficient& a,
                              double tolerance) {
  constexpr int kCells = 4096;
  auto inv_a = [&a](double x) { return 1.0 / a(x); };
  std::vector<double> phi(kCells + 1, 0.0);
  for (int k = 0; k < kCells; ++k) {
    const auto q = Integrate(inv_a, static_cast<double>(k) / kCells,
                             static_cast<double>(k + 1) / kCells, tolerance,
                             a.breakpoints());
    if (!q.converged) {
      throw NumericError("normal form: quadrature of 1/a did not converge");
    }
    phi[k + 1] = phi[k] + q.value;
  }
  const double L = phi.back();

  auto local = [a](double x0, double x1) {
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [&a](double x) { return 1.0 / a(x); }, x0, x1);
  };
  // x = phi^-1(y): locate the cell, then Newton with bisection safeguard.
  auto inverse = [phi, local, a](double y) {
    y = std::clamp(y, 0.0, phi.back());
    size_t k = std::upper_bound(phi.begin(), phi.end(), y) - phi.begin();
    k = std::clamp<size_t>(k, 1, phi.size() - 1) - 1;
    double lo = static_cast<double>(k) / kCells, hi = static_cast<double>(k + 1) / kCells;
    double x = lo + (y - phi[k]) * a(lo);
    for (int it = 0; it < 60; ++it) {
      x = std::clamp(x, lo, hi);
      const double g = phi[k] + local(static_cast<double>(k) / kCells, x) - y;
      if (std::abs(g) < 1e-15 * std::max(1.0, phi.back())) break;
      if (g > 0) hi = x; else lo = x;
      const double next = x - g * a(x);
      x = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
    }
    return x;
  };

  std::vector<double> ybreaks;
  for (double b : rho.breakpoints()) ybreaks.push_back(phi[std::min<int>(kCells, static_cast<int>(b * kCells))]);
  for (double b : a.breakpoints()) ybreaks.push_back(phi[std::min<int>(kCells, static_cast<int>(b * kCells))]);

  nlohmann::json prov;
  prov["family"] = "normal-form";
  prov["rho"] = ToJson(rho);
  prov["a"] = ToJson(a);
  Coefficient omega(
      Kind::kCustom,
      [rho, a, inverse](double y) {
        const double x = inverse(y);
        return rho(x) * a(x);
      },
      rho.lower() * a.lower(), rho.upper() * a.upper(), prov, L, ybreaks);

  NormalForm out{omega, L, 0.0, 0.0};
  std::vector<double> br = rho.breakpoints();
  br.insert(br.end(), a.breakpoints().begin(), a.breakpoints().end());
  out.travel_time_original =
      Integrate([&](double x) { return std::sqrt(rho(x) / a(x)); }, 0.0, 1.0,
                tolerance, br).value;
  out.travel_time_reduced = ComputeTravelTime(omega, tolerance).value;
  return out;
}

TravelTime ComputeTravelTime(const Coefficient& omega, double tolerance) {
  auto f = [&omega](double x) { return std::sqrt(omega(x)); };
  const auto q = Integrate(f, 0.0, omega.length(), tolerance, omega.breakpoints());
  if (q.converged) return {q.value, q.error, false};
  // Composite Simpson on a fine grid, bracketed by the half-grid result.
  auto simpson = [&](int n) {
    const double h = omega.length() / n;
    double s = f(0) + f(omega.length());
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
    return s * h / 3;
  };
  const double fine = simpson(1 << 21), coarse = simpson(1 << 20);
  return {fine, std::abs(fine - coarse), true};
}

nlohmann::json ToJson(const Coefficient& omega) {
  nlohmann::json j;
  j["kind"] = ToString(omega.kind());
  j["lower"] = omega.lower();
  j["upper"] = omega.upper();
  j["length"] = omega.length();
  j["params"] = omega.provenance();
  return j;
}

Coefficient FromJson(const nlohmann::json& d) {
  const nlohmann::json& p = d.at("params");
  const std::string family = p.value("family", "");
  if (family == "counterexample") {
    const auto& s = p.at("sequence");
    const auto params = MakeSequences(
        DescriptorFromName(s.at("descriptor")), s.at("N"), s.at("j_lo"),
        s.at("j_hi"), SequenceModeFromString(s.at("mode")), s.at("M"),
        s.at("j0"));
    const auto pairs = BuildPairs(params, CutoffFromJson(p.at("cutoff")));
    if (p.contains("only_j")) {
      const int only = p.at("only_j");
      for (const auto& c : MakeLambdaDensities(params, pairs)) {
        if (c.provenance().value("only_j", 0) == only) return c;
      }
    }
    return MakeCounterexampleDensity(params, pairs);
  }
  if (family == "normal-form") {
    return ReduceToNormalForm(FromJson(p.at("rho")), FromJson(p.at("a"))).omega;
  }
  if (family.empty()) {
    throw std::invalid_argument("coefficient descriptor has no family");
  }
  return MakeBaseline(family, ParamsFromJson(p));
}

std::string ToCsv(const Coefficient& omega, int n) {
  std::ostringstream out;
  out.precision(17);
  out << "x,omega\n";
  for (int i = 0; i <= n; ++i) {
    const double x = omega.length() * i / n;
    out << x << ',' << omega(x) << '\n';
  }
  return out.str();
}

}  // namespace coeff
}  // namespace roughwave
