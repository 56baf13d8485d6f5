#pragma once

#include <optional>
#include <vector>

#include "fpme/green.hpp"
#include "fpme/spectral.hpp"

namespace fpme {

struct SolverConfig {
  std::vector<double> time_grid;      // strictly increasing, t_0 > 0
  double newton_tol = 1e-10;          // relative to ||u_k||_inf
  int newton_max_iter = 50;
  double damping = 0.5;               // backtracking factor
  double boundary_mass_cap = 1e-4;    // abort threshold for the monitor
  bool linear_diagnostic = false;     // allow m = 1 (resolvent mode)

  void validate() const;  // throws std::invalid_argument
};

// Geometric grid t_min * q^k capped at t_max (t_max itself is the last entry).
std::vector<double> geometric_times(double t_min, double t_max, double q);

// The discrete solution curve.  times[0] = 0 holds the datum; norms are
// recorded at every entry.  Profiles are dense (n_times x n_cells is at
// most a few tens of MB at desk scale).
struct Trajectory {
  double m = 2.0;
  double s = 0.5;
  std::vector<double> times;            // starts at 0
  std::vector<Vector> profiles;         // one per time
  std::vector<double> l1, l2, linf;     // norms per time
  std::vector<double> weighted_rho0;    // inner + outer Green norm at rho=0
  std::vector<double> boundary_mass;    // L1 fraction in [r_max/2, r_max]

  int steps() const { return static_cast<int>(times.size()) - 1; }
};

// One implicit-Euler step: solves h L^s(u^m) + u = u_k by damped Newton
// with iterates projected to >= 0.  Jacobian h L^s diag(m u^{m-1}) + I is
// formed densely and LU-factored each iteration.  Throws SolverError with
// the last residual if Newton stagnates.
Vector implicit_euler_step(const FractionalOperator& op, double m, double h,
                           const Vector& u_k, const SolverConfig& cfg);

// Steps through cfg.time_grid from u0 at t = 0, recording norms and the
// boundary-mass monitor (abort via SolverError when the cap is exceeded).
// The Green profile supplies the weighted-norm column; pass nullptr to
// compute it internally from op.
Trajectory evolve(const FractionalOperator& op, double m, const Vector& u0,
                  const SolverConfig& cfg, const GreenProfile* G = nullptr);

// ---- Property checkers (report-only; `pass` summarizes) ----

struct OrderReport {
  double max_pointwise_violation;  // max over nodes/times of u - v
  double max_plus_part_growth;     // max over times of int (u-v)_+ - initial
  bool pass;
};
OrderReport check_order_preservation(const RadialGrid& grid,
                                     const Trajectory& u,
                                     const Trajectory& v);

struct NonexpansivityReport {
  double p;                 // 1, 2, or infinity
  double max_growth;        // max over steps of ||u_{k+1}||_p - ||u_k||_p
  bool pass;                // growth <= 1e-10 * ||u_0||_p
};
NonexpansivityReport check_lp_nonexpansivity(const Trajectory& traj, double p);

struct TimeMonotonicityReport {
  double max_violation;     // max over nodes/steps of drop in t^{1/(m-1)} u
  double scale;             // max of t^{1/(m-1)} u, sets the tolerance
  bool pass;                // violation <= 1e-8 * scale
};
TimeMonotonicityReport check_time_monotonicity(const Trajectory& traj);

// ---- Monotone approximation (two truncation styles) ----

struct MonotoneApproxReport {
  std::vector<Trajectory> radius_first;   // chi_{B_k} u0 for k in radius_levels
  std::vector<Trajectory> height_first;   // min(u0, h) for h in height_levels
  double max_order_violation;             // within each sequence, consecutive levels
  std::vector<double> datum_decrements;   // weighted norm of u_{0,j+1} - u_{0,j}
  std::vector<double> solution_decrements;  // max over t of the same for u_j(t)
  double decrement_constant;              // max(1, 1/G(1)), the provable bound
  double limit_disagreement;              // L_inf relative, finest levels
  bool ordered;
};

MonotoneApproxReport monotone_approximation(
    const FractionalOperator& op, double m, const Vector& u0,
    const std::vector<double>& radius_levels,
    const std::vector<double>& height_levels, const SolverConfig& cfg,
    const GreenProfile& G);

}  // namespace fpme
