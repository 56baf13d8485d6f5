#include "fpme/semigroup.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fpme/errors.hpp"

namespace fpme {

void SolverConfig::validate() const {
  if (time_grid.empty())
    throw std::invalid_argument("solver config: empty time grid");
  if (!(time_grid.front() > 0.0))
    throw std::invalid_argument("solver config: first time must be > 0");
  for (size_t k = 1; k < time_grid.size(); ++k)
    if (!(time_grid[k] > time_grid[k - 1]))
      throw std::invalid_argument(
          "solver config: times must be strictly increasing");
  if (!(newton_tol > 0.0))
    throw std::invalid_argument("solver config: newton_tol must be > 0");
  if (newton_max_iter < 1)
    throw std::invalid_argument("solver config: newton_max_iter must be >= 1");
  if (!(damping > 0.0 && damping < 1.0))
    throw std::invalid_argument("solver config: damping must lie in (0, 1)");
  if (!(boundary_mass_cap > 0.0))
    throw std::invalid_argument("solver config: boundary cap must be > 0");
}

std::vector<double> geometric_times(double t_min, double t_max, double q) {
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("geometric_times: need 0 < t_min < t_max");
  if (!(q > 1.0)) throw std::invalid_argument("geometric_times: need q > 1");
  std::vector<double> times{t_min};
  while (times.back() < t_max)
    times.push_back(std::min(times.back() * q, t_max));
  return times;
}

namespace {

Vector clamped_pow(const Vector& u, double m) {
  Vector v(u.size());
  for (int i = 0; i < u.size(); ++i)
    v[i] = std::pow(std::max(u[i], 0.0), m);
  return v;
}

void check_nonlinearity(double m, const SolverConfig& cfg) {
  if (m == 1.0 && cfg.linear_diagnostic) return;
  if (!(m > 1.0))
    throw std::invalid_argument(
        "nonlinearity exponent must satisfy m > 1 (m = 1 only in the linear "
        "diagnostic mode)");
}

}  // namespace

Vector implicit_euler_step(const FractionalOperator& op, double m, double h,
                           const Vector& u_k, const SolverConfig& cfg) {
  if (!(h > 0.0)) throw std::domain_error("implicit_euler_step: h must be > 0");
  check_nonlinearity(m, cfg);
  const Eigen::MatrixXd& Ms = op.dense_power();
  int n = static_cast<int>(u_k.size());

  double scale = std::max(u_k.cwiseAbs().maxCoeff(), 1e-300);
  Vector u = u_k;
  auto residual = [&](const Vector& v) -> Vector {
    return h * (Ms * clamped_pow(v, m)) + v - u_k;
  };

  Vector F = residual(u);
  double fnorm = F.cwiseAbs().maxCoeff();
  for (int iter = 0; iter < cfg.newton_max_iter; ++iter) {
    if (fnorm <= cfg.newton_tol * scale) return u;
    // J = I + h Ms diag(m u^{m-1}); zero cells leave identity rows, which
    // is what carries the free boundary without regularization.
    Eigen::MatrixXd J = Ms;
    for (int i = 0; i < n; ++i)
      J.col(i) *= h * m * std::pow(std::max(u[i], 0.0), m - 1.0);
    J.diagonal().array() += 1.0;
    Vector d = Eigen::PartialPivLU<Eigen::MatrixXd>(J).solve(-F);

    double alpha = 1.0;
    while (alpha > 1e-4) {
      Vector trial = (u + alpha * d).cwiseMax(0.0);
      Vector Ft = residual(trial);
      if (Ft.cwiseAbs().maxCoeff() <= (1.0 - 0.25 * alpha) * fnorm) break;
      alpha *= cfg.damping;
    }
    u = (u + alpha * d).cwiseMax(0.0);
    F = residual(u);
    fnorm = F.cwiseAbs().maxCoeff();
  }
  if (fnorm <= cfg.newton_tol * scale) return u;
  throw SolverError("newton stagnated after " +
                    std::to_string(cfg.newton_max_iter) +
                    " iterations; residual " + std::to_string(fnorm) +
                    " vs tolerance " + std::to_string(cfg.newton_tol * scale));
}

Trajectory evolve(const FractionalOperator& op, double m, const Vector& u0,
                  const SolverConfig& cfg, const GreenProfile* G) {
  cfg.validate();
  check_nonlinearity(m, cfg);
  const RadialGrid& grid = op.grid();

  double tol_neg = 1e-12 * std::max(u0.cwiseAbs().maxCoeff(), 0.0);
  if (u0.minCoeff() < -tol_neg)
    throw std::invalid_argument("evolve: datum has a negative part");

  GreenProfile local;
  if (G == nullptr) {
    local = green_function(op);
    G = &local;
  }

  Trajectory traj;
  traj.m = m;
  traj.s = op.s();
  auto record = [&](double t, const Vector& u) {
    traj.times.push_back(t);
    traj.profiles.push_back(u);
    traj.l1.push_back(integral(grid, u.cwiseAbs()));
    traj.l2.push_back(lp_norm(grid, u, 2.0));
    traj.linf.push_back(linf_norm(u));
    traj.weighted_rho0.push_back(weighted_norm(*G, u, 0.0).total);
    double mass = 0.0, outer = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      double a = std::abs(u[i]) * grid.weights[i];
      mass += a;
      if (grid.centers[i] >= 0.5 * grid.r_max) outer += a;
    }
    double fraction = mass > 0.0 ? outer / mass : 0.0;
    traj.boundary_mass.push_back(fraction);
    if (fraction > cfg.boundary_mass_cap)
      throw SolverError("boundary-mass monitor tripped: fraction " +
                        std::to_string(fraction) + " exceeds cap " +
                        std::to_string(cfg.boundary_mass_cap) + " at t = " +
                        std::to_string(t));
  };

  Vector u = u0.cwiseMax(0.0);
  record(0.0, u);
  double t_prev = 0.0;
  for (double t : cfg.time_grid) {
    try {
      u = implicit_euler_step(op, m, t - t_prev, u, cfg);
    } catch (const SolverError& e) {
      throw SolverError("step to t = " + std::to_string(t) + " failed: " +
                        e.what());
    }
    record(t, u);
    t_prev = t;
  }
  return traj;
}

OrderReport check_order_preservation(const RadialGrid& grid,
                                     const Trajectory& u,
                                     const Trajectory& v) {
  if (u.times.size() != v.times.size())
    throw std::invalid_argument("order check: trajectories differ in length");
  double scale =
      std::max(u.profiles[0].cwiseAbs().maxCoeff(),
               v.profiles[0].cwiseAbs().maxCoeff());
  OrderReport rep;
  rep.max_pointwise_violation = -std::numeric_limits<double>::infinity();
  double plus0 = 0.0;
  rep.max_plus_part_growth = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < u.times.size(); ++k) {
    rep.max_pointwise_violation =
        std::max(rep.max_pointwise_violation,
                 (u.profiles[k] - v.profiles[k]).maxCoeff());
    double plus =
        integral(grid, (u.profiles[k] - v.profiles[k]).cwiseMax(0.0));
    if (k == 0)
      plus0 = plus;
    else
      rep.max_plus_part_growth =
          std::max(rep.max_plus_part_growth, plus - plus0);
  }
  // Ordered data must stay ordered pointwise; crossing data only owe the
  // plus-part contraction int (u-v)_+ <= int (u0-v0)_+.
  bool initially_ordered =
      (u.profiles[0] - v.profiles[0]).maxCoeff() <= 1e-12 * scale;
  bool pointwise_ok = rep.max_pointwise_violation <= 1e-12 * scale;
  bool plus_ok = rep.max_plus_part_growth <= 1e-10 * (u.l1[0] + v.l1[0]);
  rep.pass = plus_ok && (!initially_ordered || pointwise_ok);
  return rep;
}

NonexpansivityReport check_lp_nonexpansivity(const Trajectory& traj,
                                             double p) {
  const std::vector<double>* series = nullptr;
  if (p == 1.0)
    series = &traj.l1;
  else if (p == 2.0)
    series = &traj.l2;
  else if (std::isinf(p))
    series = &traj.linf;
  else
    throw std::invalid_argument("nonexpansivity check supports p = 1, 2, inf");
  NonexpansivityReport rep;
  rep.p = p;
  rep.max_growth = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < series->size(); ++k)
    rep.max_growth = std::max(rep.max_growth,
                              (*series)[k + 1] - (*series)[k]);
  rep.pass = rep.max_growth <= 1e-10 * series->front();
  return rep;
}

TimeMonotonicityReport check_time_monotonicity(const Trajectory& traj) {
  if (!(traj.m > 1.0))
    throw std::invalid_argument("time monotonicity needs m > 1");
  double e = 1.0 / (traj.m - 1.0);
  TimeMonotonicityReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  rep.scale = 0.0;
  Vector prev;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    Vector scaled = std::pow(traj.times[k], e) * traj.profiles[k];
    rep.scale = std::max(rep.scale, scaled.maxCoeff());
    if (k > 0)
      rep.max_violation =
          std::max(rep.max_violation, (prev - scaled).maxCoeff());
    prev = std::move(scaled);
  }
  rep.pass = rep.max_violation <= 1e-8 * rep.scale;
  return rep;
}

MonotoneApproxReport monotone_approximation(
    const FractionalOperator& op, double m, const Vector& u0,
    const std::vector<double>& radius_levels,
    const std::vector<double>& height_levels, const SolverConfig& cfg,
    const GreenProfile& G) {
  if (radius_levels.size() != height_levels.size() || radius_levels.empty())
    throw std::invalid_argument(
        "monotone_approximation: level lists must be nonempty and equal in "
        "length");
  const RadialGrid& grid = op.grid();
  const ModelManifold& manifold = op.manifold();

  MonotoneApproxReport rep;
  for (double R : radius_levels) {
    Vector datum = u0.cwiseProduct(ball_indicator(manifold, grid, R));
    rep.radius_first.push_back(evolve(op, m, datum, cfg, &G));
  }
  for (double h : height_levels) {
    Vector datum = u0.cwiseMin(h);
    rep.height_first.push_back(evolve(op, m, datum, cfg, &G));
  }

  double scale = u0.cwiseAbs().maxCoeff();
  rep.max_order_violation = -std::numeric_limits<double>::infinity();
  for (const auto* seq : {&rep.radius_first, &rep.height_first})
    for (size_t j = 0; j + 1 < seq->size(); ++j)
      for (size_t k = 0; k < (*seq)[j].times.size(); ++k)
        rep.max_order_violation = std::max(
            rep.max_order_violation,
            ((*seq)[j].profiles[k] - (*seq)[j + 1].profiles[k]).maxCoeff());
  rep.ordered = rep.max_order_violation <= 1e-12 * scale;

  for (size_t j = 0; j + 1 < rep.radius_first.size(); ++j) {
    Vector d0 =
        rep.radius_first[j + 1].profiles[0] - rep.radius_first[j].profiles[0];
    rep.datum_decrements.push_back(weighted_norm(G, d0, 0.0).total);
    double worst = 0.0;
    for (size_t k = 0; k < rep.radius_first[j].times.size(); ++k) {
      Vector d = rep.radius_first[j + 1].profiles[k] -
                 rep.radius_first[j].profiles[k];
      worst = std::max(worst, weighted_norm(G, d, 0.0).total);
    }
    rep.solution_decrements.push_back(worst);
  }
  rep.decrement_constant = std::max(1.0, 1.0 / G.at(1.0));

  rep.limit_disagreement = 0.0;
  const Trajectory& A = rep.radius_first.back();
  const Trajectory& B = rep.height_first.back();
  for (size_t k = 0; k < A.times.size(); ++k) {
    double denom = B.profiles[k].maxCoeff();
    if (denom <= 0.0) continue;
    rep.limit_disagreement =
        std::max(rep.limit_disagreement,
                 (A.profiles[k] - B.profiles[k]).cwiseAbs().maxCoeff() /
                     denom);
  }
  return rep;
}

}  // namespace fpme
