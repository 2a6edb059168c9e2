#pragma once

// Calabi flow on the flat torus, complex dimension one.
//
// Conventions (fixed here once, used everywhere):
//   * domain [0,1)^2 with background form w0 = dx ^ dy, N x N periodic grid;
//   * potential phi deforms the metric conformally:
//         u = 1 + (1/2) lap(phi) > 0,     w_phi = u dx ^ dy,
//     so total area = mean(u) is conserved exactly (lap kills the zero mode);
//   * scalar curvature (twice the Gaussian curvature)
//         R = -lap(log u) / u,
//     with int R u dA = 0 on the torus (Gauss-Bonnet);
//   * the flow moves the potential by its scalar curvature,
//         d phi / dt = R - Rbar,   Rbar = int R dg / int dg,
//     and is the gradient flow of the Calabi energy C = int R^2 dg.
//
// The flow definition is dimension-agnostic; complex dimension one is the
// desk-scale testbed (convergence to constant curvature is a theorem there),
// while the exact-arithmetic modules handle the four-dimensional energy
// bookkeeping.
//
// Discretization: Fourier spectral in space (the domain is periodic and the
// stiff operator is diagonal in frequency), 2/3-rule dealiasing on the
// nonlinear term, and first-order IMEX time stepping: the linearization
// R ~ -(1/2) lap^2 phi is implicit in frequency space, the remainder
// explicit.  Explicit stepping would need dt = O(h^4); the implicit factor
// 1/(1 + dt k^4 / 2) removes that restriction.  Steps that break metric
// positivity or increase the Calabi energy beyond tolerance are rejected
// and retried with dt/2.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "calabi/errors.hpp"
#include "calabi/rational.hpp"

namespace calabi {

struct FlowConfig {
  int grid_size = 64;  // power of two, >= 16
  double dt_init = 1e-6;
  double dt_min = 1e-14;
  double dt_max = 5e-3;
  double dt_growth = 1.25;
  double u_min = 0.05;            // positivity floor, in (0,1)
  double energy_tol_rel = 1e-9;   // accepted steps may raise C by at most
  double energy_tol_abs = 1e-15;  // E*tol_rel + tol_abs (round-off headroom)
  double t_max = 1.0;
  double r_tol = 1e-8;  // stop when max|R| drops below this
  long max_steps = 2000000;

  void validate() const;
};

struct HistoryEntry {
  double time;
  double calabi_energy;
  double max_abs_r;
  double total_area;
  double dt;
};

struct FlowState {
  int n = 0;
  double time = 0.0;
  double dt = 0.0;  // current adaptive step; 0 means "use cfg.dt_init"
  Eigen::ArrayXXd phi;
  Eigen::ArrayXXd u;  // cached 1 + (1/2) lap(phi)
  std::vector<HistoryEntry> history;
};

/// Builds a state from a potential sample; recomputes u spectrally and
/// checks positivity (throws FlowBreakdownError at the first bad cell).
FlowState make_flow_state(int n, const Eigen::ArrayXXd& phi, double u_min = 0.0);

// Initial potentials.
Eigen::ArrayXXd phi_zero(int n);
Eigen::ArrayXXd phi_cosine(int n, double eps);  // eps * cos(2 pi x)
/// Band-limited random field: modes with max(|m|,|n|) <= band, seeded, then
/// scaled so that max |(1/2) lap phi| = amplitude (u stays in
/// [1-amplitude, 1+amplitude]).
Eigen::ArrayXXd phi_random_band(int n, std::uint64_t seed, int band, double amplitude = 0.3);

/// R = -lap(log u)/u.  Throws FlowBreakdownError when u <= u_min somewhere.
Eigen::ArrayXXd scalar_curvature(const FlowState& s, double u_min = 0.0);

double calabi_energy(const FlowState& s);  // int R^2 dg by grid quadrature
double total_area(const FlowState& s);     // int dg = mean(u)
double max_abs_curvature(const FlowState& s);
/// int R dg; zero on the torus up to round-off (discrete Gauss-Bonnet).
double gauss_bonnet_residual(const FlowState& s);

/// int |lap R|^2 dA: the fourth-order dissipation functional the energy
/// slope matches in the linear regime, d/dt C = -int |lap R|^2 + O(amp^3).
/// (In complex dimension one the Lichnerowicz term collapses to this single
/// bi-Laplacian quadrature at the flat metric.)
double dissipation_linear(const FlowState& s);

/// One accepted IMEX step (dt adapted inside; rejected trials halve dt).
/// Throws StiffnessFailureError when dt underflows cfg.dt_min.
FlowState step(const FlowState& s, const FlowConfig& cfg);

struct RunResult {
  FlowState state;
  bool converged = false;  // max|R| < cfg.r_tol reached before t_max
};

/// Runs until max|R| < r_tol, t >= t_max or max_steps.
RunResult run_flow(FlowState s, const FlowConfig& cfg);

// --- Hamilton interpolation inequality on the flat torus (n = 2) ---------
//
//   { int |grad T|^(2r) }^(1/r)
//       <= (2r - 2 + n) { int |grad^2 T|^p }^(1/p) { int |T|^q }^(1/q),
//
// for 1/p + 1/q = 1/r, r >= 1.  Exponents are exact rationals; the exponent
// relation is validated exactly before any floating point runs.

struct InterpolationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;  // lhs <= rhs * (1 + tol)
};

InterpolationCheck interpolation_check(const Eigen::ArrayXXd& T, const Rational& r,
                                       const Rational& p, const Rational& q, double tol = 1e-8);

/// int |grad^m T|^2 dA via Parseval (sum of |k|^(2m) |T_hat|^2), m <= 3.
double derivative_moment(const Eigen::ArrayXXd& T, int order);

// --- outputs --------------------------------------------------------------

/// CSV with header time,calabi_energy,max_abs_R,total_area,dt.
void write_history_csv(const FlowState& s, std::ostream& os);

/// <prefix>.phi.f64 and <prefix>.u.f64: flat row-major little-endian
/// float64 (index (i,j) -> x_i = i/N, y_j = j/N, j fastest), plus
/// <prefix>.json sidecar with N, time and the conventions string.
void write_snapshot(const FlowState& s, const std::string& prefix);

}  // namespace calabi
