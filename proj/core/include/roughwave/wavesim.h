#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughwave/coeff.h"

namespace roughwave {
namespace wavesim {

using coeff::Coefficient;
using Profile = std::function<double(double)>;

struct EvolveOptions {
  int resolution = 1024;
  double cfl = 0.9;
  /// Energies E_0 .. E_{energy_orders} are tracked.
  int energy_orders = 0;
  /// Store every stride-th time level of u; 0 stores none.
  int snapshot_stride = 0;
  /// Node indices whose time series u(t, x_i) are recorded.
  std::vector<int> probe_nodes;
  /// Overrides the CFL-derived step count when positive.
  int steps = 0;
};

struct WaveTrajectory {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;
  double T = 0.0;
  int steps = 0;
  double cfl = 0.0;
  std::vector<double> omega;  // nodal masses
  std::vector<double> t;
  /// One-sided third-order d/dx u at x = 0 and x = 1 for every time level.
  std::vector<double> trace0;
  std::vector<double> trace1;
  /// energy[k][l]: discrete E_k between levels l and l + 1 of d_t^k u.
  std::vector<std::vector<double>> energy;
  std::vector<std::vector<double>> snapshots;
  std::vector<double> snapshot_times;
  std::vector<int> probe_nodes;
  std::vector<std::vector<double>> probes;
  std::vector<double> u_prev;   // level steps - 1
  std::vector<double> u_final;  // level steps
  double max_boundary_abs = 0.0;

  /// (max - min) / first over the tracked series of E_k.
  double EnergyDrift(int k) const;
};

/// Time step for the given resolution and CFL number: T / ceil(T / (cfl dx sqrt(omega_*))).
double StableStep(const Coefficient& omega, int resolution, double cfl, double T);

/// Nodal sampling x_i = i / n, i = 0 .. n.
std::vector<double> SampleNodes(const Profile& f, int n);

/// omega u_tt = u_xx with u = 0 at both ends, symmetric leapfrog with nodal
/// mass omega(x_i). Throws std::invalid_argument on CFL > 1, non-power-of-two
/// resolution or T <= 0; std::domain_error on hyperbolicity failure.
WaveTrajectory Evolve(const Coefficient& omega, const Profile& u0,
                      const Profile& u1, double T, const EvolveOptions& options);

/// Same from nodal data of length resolution + 1.
WaveTrajectory EvolveNodal(const Coefficient& omega,
                           const std::vector<double>& u0,
                           const std::vector<double>& u1, double T,
                           const EvolveOptions& options);

/// Continues the scheme from two consecutive levels; returns the last two
/// levels {prev, curr} after `steps` steps.
std::pair<std::vector<double>, std::vector<double>> StepLevels(
    const std::vector<double>& omega_nodes, double dx, double dt,
    std::vector<double> prev, std::vector<double> curr, int steps);

struct BoundaryForcing {
  Profile f;  // u(t, 0)
  Profile g;  // u(t, 1)
};

struct InhomogeneousResult {
  WaveTrajectory trajectory;
  /// int_0^T int (omega z_t^2 + z_x^2) / (omega^* (|f|_{W2} + |g|_{W2})^2 sums).
  double interior_ratio = 0.0;
  /// int_0^T (z_x(t,0)^2 + z_x(t,1)^2) / (omega^* (|f|^2_{W3} + |g|^2_{W3})).
  double flux_ratio = 0.0;
  double interior_energy = 0.0;
  double boundary_flux = 0.0;
  /// f(0) or g(0) nonzero: the data jump at t = 0 is absorbed by imposing
  /// the boundary value from the first level on.
  bool incompatible_start = false;
};

/// Zero initial data with Dirichlet values f, g.
InhomogeneousResult EvolveInhomogeneous(const Coefficient& omega,
                                        const BoundaryForcing& forcing,
                                        double T, const EvolveOptions& options);

/// W^{k,infinity} norm of a sampled signal: sum over derivative orders <= k of
/// sup norms, derivatives by repeated central differences.
double SobolevInfNorm(const std::vector<double>& signal, double dt, int k);

struct SidewiseResult {
  double dx = 0.0;
  double dt = 0.0;
  std::vector<double> x;
  double t0 = 0.0;
  /// fields[i][l]: u(t0 + l dt, x_i); valid for first_valid[i] <= l <= last_valid[i].
  std::vector<std::vector<double>> fields;
  std::vector<int> first_valid;
  std::vector<int> last_valid;
  /// sideways energies F_k(x_i) over the valid window.
  std::vector<std::vector<double>> F;

  double At(int i, double t) const;
};

/// Integrates u_xx = omega u_tt in x from x0 over `span` (positive: towards
/// x = 1) starting from u(t, x0) and u_x(t, x0) sampled at spacing dt_in
/// starting at t = 0. The transverse window loses one cell per x-step.
/// Throws std::invalid_argument when the window would close before the span
/// is reached.
SidewiseResult SidewiseEvolve(const Coefficient& omega,
                              const std::vector<double>& u_slice,
                              const std::vector<double>& ux_slice, double dt_in,
                              double x0, double span, int x_steps,
                              int energy_orders = 0);

/// D_omega^m f = ((1/omega) d^2/dx^2)^m f on nodal samples with odd reflection
/// at the ends. Throws NumericError when the round-off amplification exceeds
/// 1e-3 of the result.
std::vector<double> ApplyDOmega(const std::vector<double>& f,
                                const Coefficient& omega, int m);

/// (sum (1 + xi^2)^beta |F(xi)|^2)^{1/2} of the trace after a cosine taper on
/// 10% of the window at each end and zero padding to 4x the next power of two;
/// xi is angular frequency. beta = 0 gives the L2 norm of the tapered trace.
double TraceSobolevNorm(const std::vector<double>& trace, double dt, double beta);

/// Same convention with weight (1 + xi^2)^-m: the H^-m norm of a control.
double TraceDualNorm(const std::vector<double>& trace, double dt, double m);

nlohmann::json Summary(const WaveTrajectory& traj);
std::string TracesCsv(const WaveTrajectory& traj);
std::string EnergyCsv(const WaveTrajectory& traj);
/// Header int32 n, int32 count, double T, then count rows of n + 1 doubles.
std::string SnapshotBytes(const WaveTrajectory& traj);
void WriteSnapshots(const WaveTrajectory& traj, const std::string& path);

}  // namespace wavesim
}  // namespace roughwave
