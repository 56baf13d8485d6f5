#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fpme/semigroup.hpp"

namespace fpme {

// ---- Weak dual solution residual ----

// Space-time test function bump(r/sigma) * bump((t - t_center)/t_width);
// support must sit inside the grid and the recorded time range.
struct TestFunction {
  double sigma;
  double t_center;
  double t_width;
};

// |int dt_psi L^{-s}u dmu dt - int u^m psi dmu dt| / int u^m |psi| dmu dt,
// trapezoid over the recorded times (t = 0 carries a half-weight like any
// endpoint).  Throws std::domain_error if the support leaves the range.
double wds_residual(const FractionalOperator& op, const Trajectory& traj,
                    const TestFunction& psi);

// ---- Green moments and the constant-exact inequality ----

// int u(t) G(d(., x0)) dmu per recorded time, center offset rho.
std::vector<double> green_moment_series(const GreenProfile& G,
                                        const Trajectory& traj, double rho);

struct FundamentalBoundRow {
  double t0, t1, t;
  double lower;   // (t0/t1)^{m/(m-1)} (t1-t0) u^m(t0, origin)
  double middle;  // int [u(t0) - u(t1)] G dmu
  double upper;   // (m-1) t^{m/(m-1)} / t0^{1/(m-1)} u^m(t, origin)
  bool pass;      // lower <= middle <= upper with 1e-3 relative slack
};

// Evaluates the two-sided bound on index triples (k0 <= k1 <= k) into the
// recorded times; u(., origin) is the first-cell value.
std::vector<FundamentalBoundRow> fundamental_bound_check(
    const GreenProfile& G, const Trajectory& traj,
    const std::vector<std::array<int, 3>>& triples);

// ---- Smoothing-rate fits ----

struct SmoothingReport {
  std::string regime;
  double t_lo = 0.0, t_hi = 0.0;       // fit window
  double fitted_exponent = 0.0;        // slope of log ||u||_inf vs log t
  double stderr_exponent = 0.0;
  double target_exponent = 0.0;
  std::vector<double> ratio_times;
  std::vector<double> ratio_series;    // theorem's bounding ratio per time
  double ratio_spread = 0.0;           // max/min (or max/median, per check)
  bool pass = false;
};

// Least-squares slope of log ||u(t)||_inf over [t_lo, t_hi], plus the
// Euclidean ratio series ||u||_inf t^{N theta1} / ||u0||_1^{2s theta1}
// with theta1 = 1/(2s + N(m-1)).  Requires at least 12 samples per decade
// and at least half a decade of window (std::invalid_argument otherwise).
SmoothingReport fit_smoothing_exponent(const Trajectory& traj, int N,
                                       double t_lo, double t_hi);

// Hyperbolic long-time audit: ratio ||u||_inf t^{1/(m-1)} /
// [log(t ||u0||_1^{m-1})]^{s/(m-1)} on [t*, 50 t*] with the threshold
// t* = e^{(N-1)(m-1)sqrt(c)} ||u0||_1^{-(m-1)} computed from recorded norms,
// bounded by 2x its value at t*; plus the late-time slope over
// [300 t*, 1000 t*], which must be steeper than the Euclidean rate.
// Throws std::invalid_argument when the trajectory ends before the window.
SmoothingReport hyperbolic_longtime_check(const Trajectory& traj, int N,
                                          double c);

// Weighted-data audit.  Short-time branch (t <= t*): ratio
// ||u||_inf t^{N theta1} / ||u0||_G^{2s theta1} on [t*/10, t*]; long-time
// branch (t >= t*): ||u||_inf t^{1/m} / ||u0||_G^{1/m}; both bounded by
// 3x the series median.  t* = ||u0||_G^{-(m-1)} from the weighted norm of
// the datum (supplied by the caller; the trajectory's datum may be non-L1).
SmoothingReport weighted_smoothing_check(const Trajectory& traj, int N,
                                         double datum_weighted_norm,
                                         bool short_time);

// Weighted least-squares fit of log y = a log t + b returning (a, stderr_a);
// used by the reports above and exposed for the tools.
std::pair<double, double> loglog_fit(const std::vector<double>& t,
                                     const std::vector<double>& y);

}  // namespace fpme
