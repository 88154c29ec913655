#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughwave/coeff.h"
#include "roughwave/oscillator.h"
#include "roughwave/sequences.h"

namespace roughwave {
namespace quasimodes {

using coeff::Coefficient;

/// phi'' + h^2 omega phi = 0 with phi(center) = 1, phi'(center) = 0.
struct QuasimodeSpec {
  int j = 0;
  double h = 1.0;
  double center = 0.5;
  /// r_j / 2; zero when no active interval is attached.
  double radius = 0.0;
  /// Oscillator of the active interval; enables the closed-form cross-check.
  std::shared_ptr<const coeff::PeriodicPair> pair;
};

QuasimodeSpec SpecFor(const coeff::CounterexampleParams& params,
                      const coeff::PairMap& pairs, int j);

struct SolveOptions {
  double tolerance = 1e-12;
  /// Output grid points per oscillation period 1/h (rounded to a power of two).
  int samples_per_period = 64;
  int min_samples = 4096;
};

struct QuasimodeResult {
  int j = 0;
  double h = 0.0;
  double center = 0.0;
  double radius = 0.0;
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> dphi;
  double interior_mass = 0.0;
  /// |phi|^2 + |phi'|^2 at center -/+ radius.
  double extreme_left = 0.0;
  double extreme_right = 0.0;
  /// exp(-c eps h r) from the oscillator; 0 without a pair.
  double extreme_closed_form = 0.0;
  double boundary0 = 0.0;
  double boundary1 = 0.0;
  double log_boundary0 = 0.0;
  double log_boundary1 = 0.0;
  /// sup |phi - w(h (x - center))| over the active interval.
  double closed_form_error = 0.0;
  /// |(phi - 1, phi'/h)(center)| after integrating back from the ends of the
  /// active interval (of the domain when there is none).
  double reversibility_error = 0.0;
  long steps = 0;
  double tolerance = 0.0;
  double global_error = 0.0;

  double extreme_energy() const { return std::max(extreme_left, extreme_right); }
  /// Index of the output grid point at x (nearest).
  size_t Index(double x) const;
};

/// Adaptive Dormand-Prince 5(4), step ceiling 1/(16 h), outward from the
/// center in both directions. Throws ScaleOutOfReach when the boundary or
/// extreme amplitudes fall below the estimated global error.
QuasimodeResult SolveQuasimode(const Coefficient& omega, const QuasimodeSpec& spec,
                               const SolveOptions& options = {});

struct GronwallRatios {
  double x1 = 0.0;
  double x2 = 0.0;
  /// E(x2) / (E(x1) exp(h |int |4 pi^2 - omega||)), E = 4 pi^2 h^2 phi^2 + phi'^2.
  double e_ratio = 0.0;
  double e_exponent = 0.0;
  /// Etilde(x2) / (Etilde(x1) exp(|int |omega'| / omega|)), Etilde = h^2 omega phi^2 + phi'^2.
  double et_ratio = 0.0;
  double et_exponent = 0.0;
  bool et_checked = false;
};

/// Both points must lie on the output grid of phi. The Etilde check is
/// declined when a breakpoint of omega lies between x1 and x2.
GronwallRatios EnergyGronwallCheck(const QuasimodeResult& phi,
                                   const Coefficient& omega, double x1, double x2);

struct SweepRow {
  int j = 0;
  double h = 0.0;
  double eps = 0.0;
  double interior_mass = 0.0;
  double extreme_energy = 0.0;
  double extreme_closed_form = 0.0;
  double boundary0 = 0.0;
  double boundary1 = 0.0;
  double log_boundary0 = 0.0;
  double log_boundary1 = 0.0;
  /// d log E / d log h against the previous row; 0 on the first row.
  double slope0 = 0.0;
  double slope1 = 0.0;
  /// 4 pi^2 h^2 exp(-(4/5) c eps h r): the upper bound chain at x = 0.
  double bound0 = 0.0;
  /// h int_0^{m - r/2} |4 pi^2 - omega| and (1/5) c eps h r.
  double gronwall_exponent = 0.0;
  double fifth_exponent = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// First j that was out of reach; 0 when the sweep completed.
  int truncated_at = 0;
  std::string truncation_reason;
};

/// One solve per j, spread over `jobs` threads.
SweepResult BoundarySmallnessSweep(const coeff::CounterexampleParams& params,
                                   const coeff::PairMap& pairs,
                                   const Coefficient& omega,
                                   const SolveOptions& options = {}, int jobs = 1);

nlohmann::json ToJson(const QuasimodeResult& result);
std::string ProfileCsv(const QuasimodeResult& result);
std::string SweepCsv(const SweepResult& sweep);

}  // namespace quasimodes
}  // namespace roughwave
