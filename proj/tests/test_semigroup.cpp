#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fpme/errors.hpp"
#include "fpme/field.hpp"
#include "fpme/semigroup.hpp"
#include "lab.hpp"

using namespace fpme;
using testlab::GreenLab;

namespace {

GreenLab& lab() {
  static GreenLab* L = new GreenLab(3, Warping::euclidean(), 20.0, 256, 0.5);
  return *L;
}

SolverConfig make_cfg(double t_min, double t_max, double q) {
  SolverConfig cfg;
  cfg.time_grid = geometric_times(t_min, t_max, q);
  cfg.boundary_mass_cap = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("geometric time grids hit t_max exactly") {
  auto times = geometric_times(1e-3, 2.0, 1.2);
  CHECK(times.front() == 1e-3);
  CHECK(times.back() == 2.0);
  for (size_t k = 1; k < times.size(); ++k) {
    CHECK(times[k] > times[k - 1]);
    CHECK(times[k] / times[k - 1] <= 1.2 * (1 + 1e-12));
  }
  CHECK_THROWS_AS(geometric_times(0.0, 1.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(geometric_times(1.0, 0.5, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(geometric_times(1e-3, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.5);
  CHECK_NOTHROW(cfg.validate());
  SolverConfig bad = cfg;
  bad.time_grid.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.time_grid[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.newton_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.newton_max_iter = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.damping = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.boundary_mass_cap = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("implicit euler step: degenerate inputs") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.5);
  Vector zero = Vector::Zero(L.grid.size());
  Vector out = implicit_euler_step(L.op, 2.0, 0.1, zero, cfg);
  CHECK(out.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(implicit_euler_step(L.op, 2.0, 0.0, zero, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(implicit_euler_step(L.op, 1.0, 0.1, zero, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(implicit_euler_step(L.op, 0.5, 0.1, zero, cfg),
                  std::invalid_argument);
}

TEST_CASE("implicit euler step satisfies its defining identity") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.5);
  Vector u0 = sample_field(L.grid, [](double r) { return bump(r / 4.0); });
  double h = 1e-5;
  Vector u1 = implicit_euler_step(L.op, 2.0, h, u0, cfg);
  Vector lhs = (u0 - u1) / h;
  Vector rhs = L.op.apply(u1.cwiseProduct(u1));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <=
        1e-4 * rhs.cwiseAbs().maxCoeff());
  CHECK(u1.minCoeff() >= 0.0);
}

TEST_CASE("linear diagnostic mode reproduces the resolvent") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.5);
  cfg.linear_diagnostic = true;
  Vector u0 = ball_indicator(L.manifold, L.grid, 2.0);
  double h = 0.3;
  Vector newton = implicit_euler_step(L.op, 1.0, h, u0, cfg);
  Vector direct = L.op.resolvent(h, u0);
  CHECK((newton - direct).cwiseAbs().maxCoeff() <=
        1e-10 * direct.cwiseAbs().maxCoeff());
}

TEST_CASE("newton reports stagnation through SolverError") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.5);
  cfg.newton_max_iter = 1;
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  CHECK_THROWS_AS(implicit_euler_step(L.op, 2.0, 1e8, u0, cfg), SolverError);
}

TEST_CASE("evolve records the datum and all norms") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.3);
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  Trajectory traj = evolve(L.op, 2.0, u0, cfg, &L.G);
  REQUIRE(traj.times.size() == cfg.time_grid.size() + 1);
  CHECK(traj.times[0] == 0.0);
  CHECK(traj.times.back() == 1.0);
  CHECK(traj.steps() == static_cast<int>(cfg.time_grid.size()));
  CHECK(traj.l1.size() == traj.times.size());
  CHECK(traj.l2.size() == traj.times.size());
  CHECK(traj.linf.size() == traj.times.size());
  CHECK(traj.weighted_rho0.size() == traj.times.size());
  CHECK(traj.boundary_mass.size() == traj.times.size());
  CHECK(traj.l1[0] == doctest::Approx(integral(L.grid, u0)).epsilon(1e-14));
  CHECK(traj.m == 2.0);
  CHECK(traj.s == 0.5);
  for (size_t k = 1; k < traj.l1.size(); ++k) CHECK(traj.l1[k] > 0.0);
}

TEST_CASE("evolve rejects negative data and zero data is stationary") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 0.1, 1.5);
  Vector bad = ball_indicator(L.manifold, L.grid, 1.0);
  bad[5] = -0.1;
  CHECK_THROWS_AS(evolve(L.op, 2.0, bad, cfg, &L.G), std::invalid_argument);

  Vector zero = Vector::Zero(L.grid.size());
  Trajectory traj = evolve(L.op, 2.0, zero, cfg, &L.G);
  for (const Vector& u : traj.profiles) CHECK(u.cwiseAbs().maxCoeff() == 0.0);
  for (double v : traj.boundary_mass) CHECK(v == 0.0);
}

TEST_CASE("boundary-mass monitor aborts with a time-stamped SolverError") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.3);
  cfg.boundary_mass_cap = 1e-12;
  Vector u0 = ball_indicator(L.manifold, L.grid, 8.0);
  bool threw = false;
  try {
    evolve(L.op, 2.0, u0, cfg, &L.G);
  } catch (const SolverError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("boundary") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("ordered data stay ordered; crossing data contract in L1") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 2.0, 1.3);
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  Vector v0 = ball_indicator(L.manifold, L.grid, 2.0);
  Trajectory tu = evolve(L.op, 2.0, u0, cfg, &L.G);
  Trajectory tv = evolve(L.op, 2.0, v0, cfg, &L.G);
  auto rep = check_order_preservation(L.grid, tu, tv);
  CHECK(rep.pass);
  CHECK(rep.max_pointwise_violation <= 1e-10);

  Vector w0 = 2.0 * u0;  // taller but narrower: crosses v0
  Trajectory tw = evolve(L.op, 2.0, w0, cfg, &L.G);
  auto rep2 = check_order_preservation(L.grid, tw, tv);
  CHECK(rep2.pass);  // plus-part still contracts
  CHECK(rep2.max_pointwise_violation > 1e-6);

  Trajectory short_traj = tu;
  short_traj.times.pop_back();
  short_traj.profiles.pop_back();
  CHECK_THROWS_AS(check_order_preservation(L.grid, short_traj, tv),
                  std::invalid_argument);
}

TEST_CASE("single implicit step preserves order") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.5);
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  Vector v0 = ball_indicator(L.manifold, L.grid, 2.0);
  Vector u1 = implicit_euler_step(L.op, 2.0, 0.5, u0, cfg);
  Vector v1 = implicit_euler_step(L.op, 2.0, 0.5, v0, cfg);
  CHECK((u1 - v1).maxCoeff() <= 1e-12);
}

TEST_CASE("Lp norms are nonexpansive along the flow") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 2.0, 1.3);
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  Trajectory traj = evolve(L.op, 2.0, u0, cfg, &L.G);
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    auto rep = check_lp_nonexpansivity(traj, p);
    CHECK(rep.pass);
  }
  CHECK_THROWS_AS(check_lp_nonexpansivity(traj, 3.0), std::invalid_argument);
}

TEST_CASE("t^{1/(m-1)} u is pointwise nondecreasing in time") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 2.0, 1.3);
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  Trajectory traj = evolve(L.op, 2.0, u0, cfg, &L.G);
  auto rep = check_time_monotonicity(traj);
  CHECK(rep.pass);
  CHECK(rep.max_violation <= 1e-8 * rep.scale);

  Trajectory linearized = traj;
  linearized.m = 1.0;
  CHECK_THROWS_AS(check_time_monotonicity(linearized), std::invalid_argument);
}

TEST_CASE("time-step halving contracts the terminal error geometrically") {
  GreenLab& L = lab();
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  double q = 1.2;
  Trajectory a = evolve(L.op, 2.0, u0, make_cfg(1e-3, 2.0, q), &L.G);
  Trajectory b = evolve(L.op, 2.0, u0, make_cfg(1e-3, 2.0, std::sqrt(q)), &L.G);
  Trajectory c =
      evolve(L.op, 2.0, u0, make_cfg(1e-3, 2.0, std::pow(q, 0.25)), &L.G);
  double ab = (a.profiles.back() - b.profiles.back()).cwiseAbs().maxCoeff();
  double bc = (b.profiles.back() - c.profiles.back()).cwiseAbs().maxCoeff();
  double ratio = ab / bc;
  CHECK(ratio > 1.5);
  CHECK(ratio < 3.0);
}

TEST_CASE("flow commutes with the exact scaling symmetry") {
  // With datum alpha*u0 and times divided by alpha^{m-1}, the solution is
  // exactly alpha times the original at matched indices (the Newton
  // iteration maps bitwise under powers of two).
  GreenLab& L = lab();
  Vector u0 = ball_indicator(L.manifold, L.grid, 1.0);
  SolverConfig ca = make_cfg(1e-3, 1.0, 1.3);
  SolverConfig cb = ca;
  for (double& t : cb.time_grid) t *= 0.5;
  Trajectory ta = evolve(L.op, 2.0, u0, ca, &L.G);
  Trajectory tb = evolve(L.op, 2.0, 2.0 * u0, cb, &L.G);
  REQUIRE(ta.times.size() == tb.times.size());
  for (size_t k = 0; k < ta.times.size(); ++k) {
    double diff =
        (tb.profiles[k] - 2.0 * ta.profiles[k]).cwiseAbs().maxCoeff();
    CHECK(diff <= 1e-13 * tb.profiles[k].cwiseAbs().maxCoeff() + 1e-300);
  }
}

TEST_CASE("monotone approximation: both truncation styles, provable chain") {
  GreenLab& L = lab();
  SolverConfig cfg = make_cfg(1e-3, 1.0, 1.3);
  Vector u0 = power_tail_field(L.manifold, L.grid, 3.0);
  auto rep = monotone_approximation(L.op, 2.0, u0, {4.0, 8.0, 16.0},
                                    {0.25, 0.5, 1.0}, cfg, L.G);
  CHECK(rep.ordered);
  CHECK(rep.max_order_violation <= 1e-10);
  REQUIRE(rep.radius_first.size() == 3);
  REQUIRE(rep.height_first.size() == 3);
  REQUIRE(rep.datum_decrements.size() == 2);
  CHECK(rep.decrement_constant ==
        doctest::Approx(std::max(1.0, 1.0 / L.G.at(1.0))).epsilon(1e-12));
  for (size_t j = 0; j < rep.datum_decrements.size(); ++j) {
    CHECK(rep.datum_decrements[j] > 0.0);
    CHECK(rep.solution_decrements[j] <=
          rep.decrement_constant * rep.datum_decrements[j] * (1 + 1e-9));
  }
  // Tail decrements shrink with the level (Cauchy behavior).
  CHECK(rep.datum_decrements[1] < rep.datum_decrements[0]);
  CHECK(rep.limit_disagreement < 5e-2);

  CHECK_THROWS_AS(monotone_approximation(L.op, 2.0, u0, {4.0}, {0.25, 0.5},
                                         cfg, L.G),
                  std::invalid_argument);
}
