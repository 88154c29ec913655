#pragma once

#include <array>
#include <vector>

#include <json.hpp>

namespace roughwave {
namespace coeff {

/// Smooth 1-periodic cutoff chi: zero outside [start, end] + phase (mod 1),
/// one on [start + width, end - width] + phase, C-infinity transitions.
struct Cutoff {
  double start = 0.05;
  double end = 0.5;
  double width = 0.15;
  double phase = 0.0;
};

nlohmann::json ToJson(const Cutoff& cutoff);
Cutoff CutoffFromJson(const nlohmann::json& j);

/// The even pair (alpha_eps, w_eps) with w'' + alpha w = 0, w(0) = 1,
/// w'(0) = 0, built as
///
///   w(y)     = cos(2 pi y) exp(-eps eta(|y|)),
///   eta'(x)  = 2 chi(x) cos^2(2 pi x),
///   alpha(y) = 4 pi^2 - 8 pi eps chi sin(4 pi x) + 2 eps chi' cos^2(2 pi x)
///              - 4 eps^2 chi^2 cos^4(2 pi x),  x = |y| mod 1.
///
/// Constants are measured at construction:
///   M     = sup |alpha - 4 pi^2| / eps over one period,
///   c     = decay rate with w(n) = exp(-c eps n),
///   gamma = int_0^1 w / eps.
class PeriodicPair {
 public:
  struct Options {
    double eps_bar = 0.05;
    double residual_tolerance = 1e-8;
    double sup_step = 1e-5;
    int decay_points = 20;
  };

  /// Throws std::invalid_argument on bad eps or cutoff and
  /// roughwave::NumericError when a property check fails.
  static PeriodicPair Build(double eps, Cutoff cutoff, const Options& options);
  static PeriodicPair Build(double eps, Cutoff cutoff = {}) {
    return Build(eps, cutoff, Options{});
  }

  double alpha(double y) const;
  double w(double y) const;
  double dw(double y) const;
  double d2w(double y) const;
  double chi(double x) const;
  double dchi(double x) const;
  double eta(double y) const;

  double eps() const { return eps_; }
  const Cutoff& cutoff() const { return cutoff_; }
  double M() const { return M_; }
  double decay_rate() const { return c_; }
  double gamma() const { return gamma_; }
  double max_residual() const { return max_residual_; }
  double decay_fit_error() const { return decay_fit_error_; }
  /// Points of [0, 1] where chi changes regime.
  std::array<double, 4> transitions() const;

 private:
  PeriodicPair(double eps, Cutoff cutoff);
  double EtaPeriod(double s) const;
  void Measure(const Options& options);

  double eps_;
  Cutoff cutoff_;
  std::vector<double> eta_table_;
  double eta_one_ = 0.0;
  double M_ = 0.0;
  double c_ = 0.0;
  double gamma_ = 0.0;
  double max_residual_ = 0.0;
  double decay_fit_error_ = 0.0;
};

}  // namespace coeff
}  // namespace roughwave
