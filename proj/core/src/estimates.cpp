#include "fpme/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fpme {

namespace {

// d/dx of the bump in field.cpp (exp(1 - 1/(1 - x^2)) on |x| < 1).
double bump_derivative(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  double s = 1.0 - x * x;
  return bump(x) * (-2.0 * x / (s * s));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Indices of recorded times falling in [t_lo, t_hi] (t = 0 never qualifies).
std::vector<size_t> window_indices(const std::vector<double>& times,
                                   double t_lo, double t_hi) {
  std::vector<size_t> idx;
  for (size_t k = 0; k < times.size(); ++k)
    if (times[k] >= t_lo && times[k] <= t_hi && times[k] > 0.0)
      idx.push_back(k);
  return idx;
}

}  // namespace

double wds_residual(const FractionalOperator& op, const Trajectory& traj,
                    const TestFunction& psi) {
  const RadialGrid& grid = op.grid();
  if (!(psi.sigma > 0.0) || psi.sigma > grid.r_max)
    throw std::domain_error("test function: spatial support leaves the grid");
  if (!(psi.t_width > 0.0) || psi.t_center - psi.t_width < 0.0 ||
      psi.t_center + psi.t_width > traj.times.back())
    throw std::domain_error(
        "test function: time support leaves the recorded range");

  Vector phi(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    phi[i] = bump(grid.centers[i] / psi.sigma);

  size_t K = traj.times.size();
  double A = 0.0, B = 0.0, Cn = 0.0;
  for (size_t k = 0; k < K; ++k) {
    double t = traj.times[k];
    double y = (t - psi.t_center) / psi.t_width;
    if (std::abs(y) >= 1.0) continue;
    double wt;  // trapezoid weight, endpoints carry half an interval
    if (k == 0)
      wt = (traj.times[1] - traj.times[0]) / 2.0;
    else if (k + 1 == K)
      wt = (traj.times[K - 1] - traj.times[K - 2]) / 2.0;
    else
      wt = (traj.times[k + 1] - traj.times[k - 1]) / 2.0;

    double eta = bump(y);
    double deta = bump_derivative(y) / psi.t_width;
    const Vector& u = traj.profiles[k];
    Vector pot = op.apply_inverse(u);
    double inner_pot = 0.0, inner_um = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      inner_pot += phi[i] * pot[i] * grid.weights[i];
      inner_um +=
          phi[i] * std::pow(std::max(u[i], 0.0), traj.m) * grid.weights[i];
    }
    A += wt * deta * inner_pot;
    B += wt * eta * inner_um;
    Cn += wt * std::abs(eta) * inner_um;
  }
  if (Cn == 0.0) return 0.0;
  return std::abs(A - B) / Cn;
}

std::vector<double> green_moment_series(const GreenProfile& G,
                                        const Trajectory& traj, double rho) {
  std::vector<double> series;
  series.reserve(traj.times.size());
  for (const Vector& u : traj.profiles)
    series.push_back(offcenter_green_moment(G, u, rho));
  return series;
}

std::vector<FundamentalBoundRow> fundamental_bound_check(
    const GreenProfile& G, const Trajectory& traj,
    const std::vector<std::array<int, 3>>& triples) {
  double m = traj.m;
  if (!(m > 1.0))
    throw std::invalid_argument("fundamental bound needs m > 1");
  int K = static_cast<int>(traj.times.size());
  std::vector<FundamentalBoundRow> rows;
  for (const auto& tri : triples) {
    int k0 = tri[0], k1 = tri[1], k = tri[2];
    if (k0 < 1 || k0 > k1 || k1 > k || k >= K)
      throw std::invalid_argument(
          "fundamental bound: triple must satisfy 1 <= k0 <= k1 <= k within "
          "the recorded times");
    FundamentalBoundRow row;
    row.t0 = traj.times[k0];
    row.t1 = traj.times[k1];
    row.t = traj.times[k];
    double mm = m / (m - 1.0);
    row.lower = std::pow(row.t0 / row.t1, mm) * (row.t1 - row.t0) *
                std::pow(traj.profiles[k0][0], m);
    row.middle = offcenter_green_moment(
        G, traj.profiles[k0] - traj.profiles[k1], 0.0);
    row.upper = (m - 1.0) * std::pow(row.t, mm) /
                std::pow(row.t0, 1.0 / (m - 1.0)) *
                std::pow(traj.profiles[k][0], m);
    double slack = 1e-14 * std::abs(row.upper);
    row.pass = row.lower <= row.middle * (1.0 + 1e-3) + slack &&
               row.middle <= row.upper * (1.0 + 1e-3) + slack;
    rows.push_back(row);
  }
  return rows;
}

SmoothingReport fit_smoothing_exponent(const Trajectory& traj, int N,
                                       double t_lo, double t_hi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo))
    throw std::invalid_argument("smoothing fit: need 0 < t_lo < t_hi");
  double decades = std::log10(t_hi / t_lo);
  if (decades < 0.5)
    throw std::invalid_argument(
        "smoothing fit: window shorter than half a decade");
  auto idx = window_indices(traj.times, t_lo, t_hi);
  if (static_cast<double>(idx.size()) < 12.0 * decades)
    throw std::invalid_argument(
        "smoothing fit: fewer than 12 samples per decade in the window");

  double theta1 = 1.0 / (2.0 * traj.s + N * (traj.m - 1.0));
  SmoothingReport rep;
  rep.regime = "global_smoothing";
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  rep.target_exponent = -N * theta1;

  std::vector<double> t, y;
  double mass0 = traj.l1[0];
  for (size_t k : idx) {
    t.push_back(traj.times[k]);
    y.push_back(traj.linf[k]);
    rep.ratio_times.push_back(traj.times[k]);
    rep.ratio_series.push_back(traj.linf[k] *
                               std::pow(traj.times[k], N * theta1) /
                               std::pow(mass0, 2.0 * traj.s * theta1));
  }
  auto [slope, se] = loglog_fit(t, y);
  rep.fitted_exponent = slope;
  rep.stderr_exponent = se;
  double lo = *std::min_element(rep.ratio_series.begin(),
                                rep.ratio_series.end());
  double hi = *std::max_element(rep.ratio_series.begin(),
                                rep.ratio_series.end());
  rep.ratio_spread = hi / lo;
  rep.pass = rep.ratio_spread < 2.0 &&
             std::abs(rep.fitted_exponent - rep.target_exponent) <= 0.08;
  return rep;
}

SmoothingReport hyperbolic_longtime_check(const Trajectory& traj, int N,
                                          double c) {
  if (!(c > 0.0))
    throw std::invalid_argument("hyperbolic long-time check: need c > 0");
  double m = traj.m, s = traj.s;
  double mass0 = traj.l1[0];
  double t_star =
      std::exp((N - 1.0) * (m - 1.0) * std::sqrt(c)) / std::pow(mass0, m - 1.0);
  if (traj.times.back() < 1000.0 * t_star)
    throw std::invalid_argument(
        "hyperbolic long-time check: trajectory ends at t = " +
        std::to_string(traj.times.back()) + ", horizon 1000 t* = " +
        std::to_string(1000.0 * t_star) + " required");

  SmoothingReport rep;
  rep.regime = "hyperbolic_longtime";
  rep.t_lo = 300.0 * t_star;
  rep.t_hi = 1000.0 * t_star;
  rep.target_exponent = -0.9;  // must fall faster than the Euclidean rate

  for (size_t k : window_indices(traj.times, t_star, 50.0 * t_star)) {
    double t = traj.times[k];
    double logfac = std::log(t * std::pow(mass0, m - 1.0));
    rep.ratio_times.push_back(t);
    rep.ratio_series.push_back(traj.linf[k] * std::pow(t, 1.0 / (m - 1.0)) /
                               std::pow(logfac, s / (m - 1.0)));
  }
  if (rep.ratio_series.empty())
    throw std::invalid_argument(
        "hyperbolic long-time check: no samples in [t*, 50 t*]");
  double first = rep.ratio_series.front();
  double worst = *std::max_element(rep.ratio_series.begin(),
                                   rep.ratio_series.end());
  rep.ratio_spread = worst / first;
  bool bounded = worst <= 2.0 * first;

  std::vector<double> t, y;
  for (size_t k : window_indices(traj.times, rep.t_lo, rep.t_hi)) {
    t.push_back(traj.times[k]);
    y.push_back(traj.linf[k]);
  }
  auto [slope, se] = loglog_fit(t, y);
  rep.fitted_exponent = slope;
  rep.stderr_exponent = se;
  rep.pass = bounded && slope <= rep.target_exponent;
  return rep;
}

SmoothingReport weighted_smoothing_check(const Trajectory& traj, int N,
                                         double datum_weighted_norm,
                                         bool short_time) {
  if (!(datum_weighted_norm > 0.0))
    throw std::invalid_argument(
        "weighted smoothing check: datum weighted norm must be > 0");
  double m = traj.m, s = traj.s;
  double Y = datum_weighted_norm;
  double t_star = std::pow(Y, -(m - 1.0));
  double theta1 = 1.0 / (2.0 * s + N * (m - 1.0));

  SmoothingReport rep;
  rep.regime = short_time ? "weighted_short_time" : "weighted_long_time";
  rep.t_lo = short_time ? t_star / 10.0 : t_star;
  rep.t_hi = short_time ? t_star : traj.times.back();
  rep.target_exponent = short_time ? -N * theta1 : -1.0 / m;

  for (size_t k : window_indices(traj.times, rep.t_lo, rep.t_hi)) {
    double t = traj.times[k];
    double ratio =
        short_time
            ? traj.linf[k] * std::pow(t, N * theta1) /
                  std::pow(Y, 2.0 * s * theta1)
            : traj.linf[k] * std::pow(t, 1.0 / m) / std::pow(Y, 1.0 / m);
    rep.ratio_times.push_back(t);
    rep.ratio_series.push_back(ratio);
  }
  if (rep.ratio_series.size() < 3)
    throw std::invalid_argument(
        "weighted smoothing check: fewer than 3 samples in the window");
  double med = median(rep.ratio_series);
  double worst = *std::max_element(rep.ratio_series.begin(),
                                   rep.ratio_series.end());
  rep.ratio_spread = worst / med;
  std::vector<double> y;
  for (size_t k : window_indices(traj.times, rep.t_lo, rep.t_hi))
    y.push_back(traj.linf[k]);
  auto [slope, se] = loglog_fit(rep.ratio_times, y);
  rep.fitted_exponent = slope;
  rep.stderr_exponent = se;
  rep.pass = worst <= 3.0 * med;
  return rep;
}

std::pair<double, double> loglog_fit(const std::vector<double>& t,
                                     const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 3)
    throw std::invalid_argument("loglog_fit: need >= 3 matching samples");
  size_t n = t.size();
  std::vector<double> x(n), z(n);
  for (size_t k = 0; k < n; ++k) {
    if (!(t[k] > 0.0) || !(y[k] > 0.0))
      throw std::invalid_argument("loglog_fit: samples must be positive");
    x[k] = std::log(t[k]);
    z[k] = std::log(y[k]);
  }
  double xbar = 0.0, zbar = 0.0;
  for (size_t k = 0; k < n; ++k) {
    xbar += x[k];
    zbar += z[k];
  }
  xbar /= n;
  zbar /= n;
  double sxx = 0.0, sxz = 0.0;
  for (size_t k = 0; k < n; ++k) {
    sxx += (x[k] - xbar) * (x[k] - xbar);
    sxz += (x[k] - xbar) * (z[k] - zbar);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_fit: degenerate window");
  double a = sxz / sxx;
  double b = zbar - a * xbar;
  double rss = 0.0;
  for (size_t k = 0; k < n; ++k) {
    double r = z[k] - (a * x[k] + b);
    rss += r * r;
  }
  double se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return {a, se};
}

}  // namespace fpme
