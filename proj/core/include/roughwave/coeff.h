#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace roughwave {
namespace coeff {

enum class Kind {
  kConstant,
  kLipschitz,
  kBvStep,
  kHoelder,
  kLogLipschitz,
  kWeierstrassZygmund,
  kCounterexamplePsi,
  kCounterexampleLambda,
  kCustom,
};

std::string ToString(Kind kind);
Kind KindFromString(const std::string& name);

/// An evaluable density on [0, length] with declared hyperbolicity bounds.
/// Immutable once built; copies share the evaluator.
class Coefficient {
 public:
  using Evaluator = std::function<double(double)>;

  Coefficient(Kind kind, Evaluator evaluator, double lower, double upper,
              nlohmann::json provenance, double length = 1.0,
              std::vector<double> breakpoints = {});

  /// Outside [0, length] the boundary value is used.
  double operator()(double x) const;

  Kind kind() const { return kind_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double length() const { return length_; }
  const nlohmann::json& provenance() const { return *provenance_; }

  /// Points where the density is non-smooth or changes regime; quadrature
  /// splits there.
  const std::vector<double>& breakpoints() const { return *breakpoints_; }

  /// Values at n + 1 uniformly spaced nodes including both endpoints.
  std::vector<double> Sample(int n) const;

  /// Throws std::domain_error if a dense sample leaves [lower, upper].
  void CheckHyperbolicity(int samples = 100000) const;

 private:
  Kind kind_;
  std::shared_ptr<const Evaluator> evaluator_;
  double lower_;
  double upper_;
  double length_;
  std::shared_ptr<const nlohmann::json> provenance_;
  std::shared_ptr<const std::vector<double>> breakpoints_;
};

/// Parameters for the closed-form families. Families read only the fields
/// they need.
struct BaselineParams {
  double value = 1.0;
  double base = 2.0;
  double amplitude = 1.0;
  double center = 0.5;
  double exponent = 0.5;
  int n_max = 16;
  double weight_power = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
};

/// Families: constant, smooth, lipschitz, bv-step, hoelder, log-lipschitz,
/// weierstrass, lacunary.
///
///   weierstrass:  base + amplitude * sum_{n=1}^{n_max} 2^-n cos(2^{n+1} pi x)
///   lacunary:     same with weights 2^-n n^weight_power
///   hoelder:      base + amplitude |x - center|^exponent
///   log-lipschitz base + amplitude s log(1 + 1/s), s = |x - center|
///   smooth:       base + amplitude cos(2 pi frequency x + phase)
Coefficient MakeBaseline(const std::string& family,
                         const BaselineParams& params = {});

struct NormalForm {
  Coefficient omega;
  double length;
  double travel_time_original;
  double travel_time_reduced;
};

/// Change of variables y = int_0^x 1/a turning (rho u_t)_t = (a u_x)_x into
/// omega u_tt = u_yy on [0, L].
NormalForm ReduceToNormalForm(const Coefficient& rho, const Coefficient& a,
                              double tolerance = 1e-10);

struct TravelTime {
  double value;
  double error;
  bool fallback;
};

/// int_0^L sqrt(omega).
TravelTime ComputeTravelTime(const Coefficient& omega,
                             double tolerance = 1e-10);

/// JSON descriptor: kind, parameters, bounds, length and any per-interval
/// records carried in the provenance.
nlohmann::json ToJson(const Coefficient& omega);

/// Rebuilds a coefficient from a descriptor written by ToJson.
Coefficient FromJson(const nlohmann::json& descriptor);

/// Two-column CSV (x, omega) with a header row.
std::string ToCsv(const Coefficient& omega, int n);

}  // namespace coeff
}  // namespace roughwave
