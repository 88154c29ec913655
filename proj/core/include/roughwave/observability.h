#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughwave/coeff.h"
#include "roughwave/quasimodes.h"
#include "roughwave/sequences.h"
#include "roughwave/wavesim.h"

namespace roughwave {
namespace observability {

using coeff::Coefficient;

/// Nodal initial data (length resolution + 1, zero at both ends).
struct Datum {
  std::string label;
  std::vector<double> u0;
  std::vector<double> u1;
};

struct QuotientOptions {
  int resolution = 1024;
  double cfl = 0.9;
  /// Denominators below floor * numerator count as zero.
  double floor = 1e-26;
};

/// ||u0||^2_{H^1_0} + ||u1||^2_{L^2} on the grid.
double InitialNorm(const Datum& d);
/// int (omega u1^2 + u0'^2): twice the initial energy.
double EnergyNorm(const Datum& d, const Coefficient& omega);

struct Quotient {
  int m = 0;
  double beta = -1.0;  // >= 0 for the fractional variant
  double numerator = 0.0;
  /// int_0^T |d_t^m trace|^2 (or the squared H^beta norm).
  double denominator = 0.0;
  /// numerator / sum_{k <= m} int |d_t^k trace|^2.
  double cumulative_denominator = 0.0;
  double value = 0.0;
  double cumulative_value = 0.0;
  bool unbounded = false;
};

/// Q_0 .. Q_{m_max} from one run; the trace is the third-order one-sided
/// difference at x = 0. Throws std::invalid_argument on zero data.
std::vector<Quotient> ObservabilityQuotients(const Coefficient& omega, const Datum& datum,
                                             double T, int m_max,
                                             const QuotientOptions& options = {});

/// Q with the squared H^beta(0, T) trace norm as denominator.
std::vector<Quotient> FractionalQuotients(const Coefficient& omega, const Datum& datum,
                                          double T, const std::vector<double>& betas,
                                          const QuotientOptions& options = {});

/// Quotients of a finished trajectory.
std::vector<Quotient> QuotientsFromTrace(const std::vector<double>& trace, double dt,
                                         double numerator, int m_max, double floor);

/// sin(k pi x) mixtures and wave packets. The ensemble adds the per-interval
/// quasimodes of a counterexample density whose spatial wavenumber 2 h_j is
/// within the cutoff.
Datum SineMode(int n, int k, double amplitude = 1.0, bool velocity = false);
Datum RandomMixture(int n, int cutoff, std::uint64_t seed);
/// Gaussian packet centred at `center` with carrier sin(k pi x), zero velocity.
Datum Packet(int n, double center, double width, int k);

struct EnsembleSpec {
  int random_members = 16;
  std::uint64_t seed = 1;
  /// Highest modes, far packets and in-band quasimodes.
  bool adversarial = true;
  int m = 0;
  /// >= 0 selects the fractional H^beta quotient instead of Q_m.
  double beta = -1.0;
};

std::vector<Datum> BuildEnsemble(const Coefficient& omega, int n, int cutoff,
                                 const EnsembleSpec& spec);

struct ConstantEstimate {
  int cutoff = 0;
  int m = 0;
  double beta = -1.0;
  double c_obs = 0.0;
  std::string worst;
  int members = 0;
  int unbounded = 0;
};

/// Max quotient over the ensemble for each cutoff; members run on `jobs` threads.
std::vector<ConstantEstimate> EstimateObservabilityConstant(
    const Coefficient& omega, double T, const std::vector<int>& cutoffs,
    const EnsembleSpec& spec, const QuotientOptions& options = {}, int jobs = 1);

/// Sup of the quotient over span{sin(k pi x)}_{k <= cutoff} for both u0 and
/// u1, as 1 / lambda_min of the trace Gramian relative to the data norm.
double GramianConstant(const Coefficient& omega, double T, int cutoff, int m = 0,
                       const QuotientOptions& options = {});

struct ObservabilityReport {
  nlohmann::json omega;
  double T = 0.0;
  double T_omega = 0.0;
  bool admissible = false;
  std::vector<std::pair<std::string, std::vector<Quotient>>> quotients;
  std::vector<ConstantEstimate> constants;
  double gramian = 0.0;
  /// Smallest m whose C_obs grows by less than 1.5 over the cutoffs; -1 if none.
  int sufficient_m = -1;
  double sufficient_beta = -1.0;
  /// The predicted loss order: |omega|_LL / omega_* (constant not asserted).
  double predicted_loss_scale = 0.0;
};

struct ReportSpec {
  std::vector<int> cutoffs{16, 64};
  int m_max = 2;
  std::vector<double> betas{0.1, 0.2};
  EnsembleSpec ensemble;
  int gramian_cutoff = 16;
};

ObservabilityReport BuildReport(const Coefficient& omega, double T, const ReportSpec& spec,
                                const QuotientOptions& options = {}, int jobs = 1);

struct DivergenceRow {
  int j = 0;
  double h = 0.0;
  double eps = 0.0;
  /// Q_m per m of the list, max over the cosine and sine phases.
  std::vector<double> Q;
  std::vector<double> denominator;
  /// int (h^2 omega phi^2 + phi'^2).
  double numerator = 0.0;
  /// |phi(0)|^2 + |phi(1)|^2 + |phi'(0)|^2.
  double boundary_smallness = 0.0;
  /// C h^{2(m+3)} (boundary smallness) for m = m_list.front(), C = 1.
  double denominator_bound = 0.0;
  /// max |u(t, 0)|, |u(t, 1)| of u = v + z.
  double boundary_residual = 0.0;
  bool incompatible_start = false;
  int resolution = 0;
};

struct DivergenceTable {
  std::vector<int> m_list;
  double T = 0.0;
  std::vector<DivergenceRow> rows;
  int truncated_at = 0;
  std::string truncation_reason;
  /// Q_m(j+1) / Q_m(j) per m, aligned with rows[1..].
  std::vector<std::vector<double>> growth;
};

struct SweepOptions {
  double T = 0.0;  // 0: 2 T_omega + 0.5
  std::vector<int> m_list{0, 1, 2};
  /// Spatial resolution is max(min_resolution, 16 h_j) rounded to a power of two.
  int min_resolution = 1024;
  int max_resolution = 16384;
  quasimodes::SolveOptions quasimode;
  int jobs = 1;
};

DivergenceTable RunCounterexampleSweep(const coeff::CounterexampleParams& params,
                                       const coeff::PairMap& pairs,
                                       const Coefficient& omega,
                                       const SweepOptions& options);

struct LambdaRow {
  int j = 0;
  double h = 0.0;
  double Q0 = 0.0;
  /// Pointwise log-Lipschitz seminorm of omega_j.
  double K = 0.0;
  double log_h = 0.0;
};

/// One density per j with a single active interval.
std::vector<LambdaRow> RunLambdaSweep(const coeff::CounterexampleParams& params,
                                      const coeff::PairMap& pairs,
                                      const SweepOptions& options);

struct UniqueContinuation {
  double ratio = 0.0;
  double window_energy = 0.0;
  double derivative_energy = 0.0;
  bool vacuous = false;
};

/// int over [T/2 - 1, T/2 + 1] of |trace|^2 against int_0^T |d_t^m trace|^2.
UniqueContinuation UniqueContinuationCheck(const wavesim::WaveTrajectory& traj, int m);

struct ControlOptions {
  int resolution = 256;
  double cfl = 0.9;
  int m = 0;
  double tolerance = 1e-6;
  int max_iterations = 200;
};

struct ControlResult {
  std::vector<double> y0;
  std::vector<double> y1;
  double T = 0.0;
  int m = 0;
  double dt = 0.0;
  std::vector<double> f;
  double terminal_l2 = 0.0;
  double terminal_hm1 = 0.0;
  double initial_norm = 0.0;
  double terminal_relative_energy = 0.0;
  /// ||f||_{L^2} and the tapered H^{-m} trace norm.
  double control_l2 = 0.0;
  double control_norm = 0.0;
  /// ||f||^2 (control metric) / (||y0||^2 + ||y1||^2_{H^-1}).
  double cost = 0.0;
  int iterations = 0;
  bool controlled = false;
  std::vector<double> residual_history;
  std::vector<double> cost_history;
  bool admissible = false;
};

/// Drives (y0, y1) to rest at time T with a Dirichlet control at x = 0 by
/// conjugate gradients on the normal equations of the discrete control map,
/// using its exact transpose. Terminal metric L^2 x H^-1 (inverse discrete
/// Dirichlet Laplacian); control metric L^2 for m = 0, else a DCT-weighted
/// (1 + xi^2)^-m form.
ControlResult HumControl(const Coefficient& omega, const std::vector<double>& y0,
                         const std::vector<double>& y1, double T,
                         const ControlOptions& options = {});

/// The discrete control map from rest, f (one value per time level) ->
/// (y(T), d_t y(T)) flattened as [p_0 .. p_n, q_0 .. q_n], and its transpose
/// in the Euclidean pairing. HumControl iterates on exactly these.
std::vector<double> ControlForward(const Coefficient& omega, int resolution, double cfl,
                                   double T, const std::vector<double>& f);
std::vector<double> ControlTranspose(const Coefficient& omega, int resolution, double cfl,
                                     double T, const std::vector<double>& state);
int ControlLevels(const Coefficient& omega, int resolution, double cfl, double T);

/// ||q||^2_{H^-1} = dx q^T (-Delta_h)^{-1} q on interior nodes.
double NegativeNormSquared(const std::vector<double>& q, double dx);

nlohmann::json ToJson(const Quotient& q);
nlohmann::json ToJson(const ObservabilityReport& report);
nlohmann::json ToJson(const ControlResult& result);
std::string DivergenceCsv(const DivergenceTable& table);
std::string HistoryCsv(const ControlResult& result);

}  // namespace observability
}  // namespace roughwave
