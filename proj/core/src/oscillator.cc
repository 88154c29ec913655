#include "roughwave/oscillator.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "roughwave/errors.h"
#include "roughwave/numerics.h"

namespace roughwave {
namespace coeff {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4 * kPi * kPi;
constexpr int kEtaCells = 1024;

double Bump(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

double DBump(double t) { return t > 0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

// C-infinity step from 0 at t <= 0 to 1 at t >= 1.
double Step(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  const double a = Bump(t), b = Bump(1 - t);
  return a / (a + b);
}

double DStep(double t) {
  if (t <= 0 || t >= 1) return 0.0;
  const double a = Bump(t), b = Bump(1 - t);
  const double da = DBump(t), db = -DBump(1 - t);
  return (da * b - a * db) / ((a + b) * (a + b));
}

double Frac(double y) { return y - std::floor(y); }

}  // namespace

nlohmann::json ToJson(const Cutoff& c) {
  return {{"start", c.start}, {"end", c.end}, {"width", c.width},
          {"phase", c.phase}};
}

Cutoff CutoffFromJson(const nlohmann::json& j) {
  Cutoff c;
  c.start = j.value("start", c.start);
  c.end = j.value("end", c.end);
  c.width = j.value("width", c.width);
  c.phase = j.value("phase", c.phase);
  return c;
}

PeriodicPair::PeriodicPair(double eps, Cutoff cutoff)
    : eps_(eps), cutoff_(cutoff) {
  eta_table_.assign(kEtaCells + 1, 0.0);
  auto integrand = [this](double x) {
    const double c = std::cos(2 * kPi * x);
    return 2 * chi(x) * c * c;
  };
  for (int k = 0; k < kEtaCells; ++k) {
    const double a = static_cast<double>(k) / kEtaCells;
    const double b = static_cast<double>(k + 1) / kEtaCells;
    eta_table_[k + 1] = eta_table_[k] +
        boost::math::quadrature::gauss<double, 20>::integrate(integrand, a, b);
  }
  eta_one_ = eta_table_.back();
}

PeriodicPair PeriodicPair::Build(double eps, Cutoff cutoff,
                                 const Options& options) {
  if (!(eps > 0) || !(eps < options.eps_bar)) {
    throw std::invalid_argument("oscillator: eps outside ]0, eps_bar[");
  }
  if (!(cutoff.width > 0 && cutoff.width < 0.5)) {
    throw std::invalid_argument("oscillator: cutoff width outside ]0, 1/2[");
  }
  if (cutoff.end - cutoff.start < 2 * cutoff.width) {
    throw std::invalid_argument("oscillator: cutoff support too short");
  }
  constexpr double kShift = 0.025;
  while (true) {
    if (!(cutoff.start + cutoff.phase > 0 && cutoff.end + cutoff.phase < 1)) {
      throw NumericError(
          "oscillator: no cutoff phase gives a positive mean of w");
    }
    PeriodicPair pair(eps, cutoff);
    pair.Measure(options);
    if (pair.max_residual_ > options.residual_tolerance) {
      throw NumericError("oscillator: ODE residual above tolerance");
    }
    if (pair.gamma_ > 0) return pair;
    cutoff.phase -= kShift;
  }
}

std::array<double, 4> PeriodicPair::transitions() const {
  const double a = cutoff_.start + cutoff_.phase;
  const double b = cutoff_.end + cutoff_.phase;
  return {a, a + cutoff_.width, b - cutoff_.width, b};
}

double PeriodicPair::chi(double x) const {
  x = Frac(x);
  const double a = cutoff_.start + cutoff_.phase;
  const double b = cutoff_.end + cutoff_.phase;
  return Step((x - a) / cutoff_.width) * Step((b - x) / cutoff_.width);
}

double PeriodicPair::dchi(double x) const {
  x = Frac(x);
  const double a = cutoff_.start + cutoff_.phase;
  const double b = cutoff_.end + cutoff_.phase;
  const double d = cutoff_.width;
  const double l = (x - a) / d, r = (b - x) / d;
  return (DStep(l) * Step(r) - Step(l) * DStep(r)) / d;
}

double PeriodicPair::EtaPeriod(double s) const {
  const int k = std::min(static_cast<int>(s * kEtaCells), kEtaCells - 1);
  const double a = static_cast<double>(k) / kEtaCells;
  if (s <= a) return eta_table_[k];
  auto integrand = [this](double x) {
    const double c = std::cos(2 * kPi * x);
    return 2 * chi(x) * c * c;
  };
  return eta_table_[k] +
         boost::math::quadrature::gauss<double, 20>::integrate(integrand, a, s);
}

double PeriodicPair::eta(double y) const {
  y = std::abs(y);
  const double n = std::floor(y);
  return n * eta_one_ + EtaPeriod(y - n);
}

double PeriodicPair::alpha(double y) const {
  const double x = Frac(std::abs(y));
  const double ch = chi(x);
  const double dch = dchi(x);
  const double c = std::cos(2 * kPi * x);
  const double c2 = c * c;
  return kFourPiSq - 8 * kPi * eps_ * ch * std::sin(4 * kPi * x) +
         2 * eps_ * dch * c2 - 4 * eps_ * eps_ * ch * ch * c2 * c2;
}

double PeriodicPair::w(double y) const {
  return std::cos(2 * kPi * y) * std::exp(-eps_ * eta(y));
}

double PeriodicPair::dw(double y) const {
  const double s = std::abs(y);
  const double x = Frac(s);
  const double c = std::cos(2 * kPi * x);
  const double deta = 2 * chi(x) * c * c;
  const double v = std::exp(-eps_ * eta(s)) *
                   (-2 * kPi * std::sin(2 * kPi * x) - eps_ * deta * c);
  return y < 0 ? -v : v;
}

double PeriodicPair::d2w(double y) const {
  const double s = std::abs(y);
  const double x = Frac(s);
  const double c = std::cos(2 * kPi * x);
  const double sn = std::sin(2 * kPi * x);
  const double ch = chi(x);
  const double g1 = -eps_ * 2 * ch * c * c;
  const double g2 =
      -eps_ * (2 * dchi(x) * c * c - 4 * kPi * ch * std::sin(4 * kPi * x));
  return std::exp(-eps_ * eta(s)) *
         (-kFourPiSq * c - 4 * kPi * g1 * sn + (g2 + g1 * g1) * c);
}

void PeriodicPair::Measure(const Options& options) {
  const int n_sup = static_cast<int>(std::lround(1.0 / options.sup_step));
  double sup = 0.0;
  for (int k = 0; k <= n_sup; ++k) {
    sup = std::max(sup, std::abs(alpha(k * options.sup_step) - kFourPiSq));
  }
  M_ = sup / eps_;

  max_residual_ = 0.0;
  for (int k = -30000; k <= 30000; ++k) {
    const double y = k * 1e-4;
    max_residual_ = std::max(max_residual_, std::abs(d2w(y) + alpha(y) * w(y)));
  }
  if (std::abs(w(0) - 1.0) > 0 || std::abs(dw(0)) > 0) {
    max_residual_ = std::max(max_residual_, 1.0);
  }

  double num = 0.0, den = 0.0;
  for (int n = 1; n <= options.decay_points; ++n) {
    num += n * (-std::log(w(n)) / eps_);
    den += static_cast<double>(n) * n;
  }
  c_ = num / den;
  decay_fit_error_ = 0.0;
  for (int n = 1; n <= options.decay_points; ++n) {
    decay_fit_error_ = std::max(decay_fit_error_,
                                std::abs(w(n) * std::exp(c_ * eps_ * n) - 1.0));
  }

  const auto t = transitions();
  const auto q = Integrate([this](double y) { return w(y); }, 0.0, 1.0, 1e-13,
                           {t.begin(), t.end()});
  gamma_ = q.value / eps_;
}

}  // namespace coeff
}  // namespace roughwave
