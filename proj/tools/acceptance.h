#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace roughwave {
namespace acceptance {

/// Every threshold the suite checks, at the stated values by default.
struct Tolerances {
  double boundary_identity = 1e-3;
  double quotient_half = 0.02;
  double energy_drift = 1e-6;
  double ode_residual = 1e-8;
  double oscillator_M_spread = 0.10;
  double decay_fit = 1e-6;
  double gamma_spread = 0.20;
  double extreme_match = 0.10;
  double interior_mass_factor = 3.0;
  double divergence_growth = 10.0;
  int divergence_run = 3;
  double numerator_factor = 3.0;
  double zygmund_growth = 1.5;
  double counterexample_growth = 10.0;
  double tv_growth = 1.5;
  int tv_levels = 4;
  double dyadic_low = 0.5;
  double dyadic_high = 2.0;
  double reconstruction = 1e-10;
  double control_energy = 1e-6;
  int control_iterations = 200;
  double duality_factor = 4.0;
  double sidewise_factor = 2.0;
};

struct Options {
  /// Lower resolutions and shorter sweeps for the self-test.
  bool reduced = false;
  int jobs = 1;
  Tolerances tolerances;
  /// Criterion ids to run; empty runs all.
  std::vector<int> only;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string measured;
  std::string limit;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<Check> checks;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  bool within_budget = true;
  std::string error;
};

/// Runs the criteria in order; a thrown exception fails only its criterion.
std::vector<CriterionResult> RunAll(const Options& options,
                                    const std::function<void(const CriterionResult&)>& on_done = {});

/// "PASS  1  title: check=value (limit); ..." without timings, so reruns
/// print identical lines.
std::string FormatLine(const CriterionResult& r);

/// Timings are left out for the same reason.
nlohmann::json ToJson(const std::vector<CriterionResult>& results);

}  // namespace acceptance
}  // namespace roughwave
