#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpme/errors.hpp"
#include "fpme/green.hpp"
#include "fpme/quadrature.hpp"

namespace fpme {

namespace {

constexpr int kAngularOrder = 96;

struct SpaceForm {
  bool hyperbolic;
  double c;  // curvature parameter when hyperbolic
};

SpaceForm classify(const ModelManifold& m) {
  switch (m.warping().kind()) {
    case Warping::Kind::euclidean:
      return {false, 0.0};
    case Warping::Kind::hyperbolic:
      return {true, m.warping().curvature_param()};
    case Warping::Kind::custom:
      throw UnsupportedError(
          "off-center Green evaluations need a distance-only Green function; "
          "custom warpings support rho = 0 only");
  }
  return {false, 0.0};
}

// Geodesic distance between points at radii rho and r with angle theta
// (given as x = cos theta) between them: law of cosines on the space form.
double distance(const SpaceForm& sf, double rho, double r, double x) {
  if (!sf.hyperbolic) {
    double d2 = rho * rho + r * r - 2.0 * rho * r * x;
    return std::sqrt(std::max(0.0, d2));
  }
  double rc = std::sqrt(sf.c);
  double ch = std::cosh(rc * rho) * std::cosh(rc * r) -
              std::sinh(rc * rho) * std::sinh(rc * r) * x;
  return std::acosh(std::max(1.0, ch)) / rc;
}

// cos(theta) at which d(rho, r, theta) = d0, or outside [-1, 1] when the
// sphere of radius d0 around the center misses the orbit.
double kink_cosine(const SpaceForm& sf, double rho, double r, double d0) {
  if (!sf.hyperbolic)
    return (rho * rho + r * r - d0 * d0) / (2.0 * rho * r);
  double rc = std::sqrt(sf.c);
  return (std::cosh(rc * rho) * std::cosh(rc * r) - std::cosh(rc * d0)) /
         (std::sinh(rc * rho) * std::sinh(rc * r));
}

// Mean of F(d) over the unit sphere of directions, i.e. the sin^{N-2}-
// weighted average over theta.  For N = 3 this is a plain average in
// x = cos theta; other dimensions integrate in theta.  `splits` lists
// x-values of integrand kinks to place panel boundaries on.
double angular_mean(const SpaceForm& sf, int N, double rho, double r,
                    const std::function<double(double)>& F,
                    const std::vector<double>& splits,
                    int order = kAngularOrder) {
  std::vector<double> bounds;  // in x, descending handled below
  bounds.push_back(-1.0);
  bounds.push_back(1.0);
  for (double xs : splits)
    if (xs > -1.0 && xs < 1.0) bounds.push_back(xs);
  std::sort(bounds.begin(), bounds.end());

  if (N == 3) {
    double acc = 0.0;
    for (size_t p = 0; p + 1 < bounds.size(); ++p)
      acc += gauss_panel(
          [&](double x) { return F(distance(sf, rho, r, x)); }, bounds[p],
          bounds[p + 1], order);
    return 0.5 * acc;
  }
  // theta domain: x = cos theta maps kinks to theta = acos(x)
  double num = 0.0, den = 0.0;
  std::vector<double> tb;
  for (auto it = bounds.rbegin(); it != bounds.rend(); ++it)
    tb.push_back(std::acos(std::clamp(*it, -1.0, 1.0)));
  for (size_t p = 0; p + 1 < tb.size(); ++p) {
    num += gauss_panel(
        [&](double th) {
          return F(distance(sf, rho, r, std::cos(th))) *
                 std::pow(std::sin(th), N - 2);
        },
        tb[p], tb[p + 1], order);
    den += gauss_panel(
        [&](double th) { return std::pow(std::sin(th), N - 2); }, tb[p],
        tb[p + 1], order);
  }
  return num / den;
}

}  // namespace

double offcenter_green_moment(const GreenProfile& G, const Vector& u,
                              double rho) {
  const RadialGrid& grid = *G.grid;
  if (rho < 0.0)
    throw std::domain_error("offcenter_green_moment: rho must be >= 0");
  if (rho == 0.0) {
    double acc = 0.0;
    for (int i = 0; i < grid.size(); ++i)
      acc += u[i] * G.values[i] * grid.weights[i];
    return acc;
  }
  SpaceForm sf = classify(*G.manifold);
  int N = G.manifold->dimension();
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    if (u[i] == 0.0) continue;
    double r = grid.centers[i];
    double mean = angular_mean(
        sf, N, rho, r, [&](double d) { return G.at(d); }, {});
    acc += u[i] * mean * grid.weights[i];
  }
  return acc;
}

WeightedNormResult weighted_norm(const GreenProfile& G, const Vector& u,
                                 double rho) {
  const RadialGrid& grid = *G.grid;
  if (rho < 0.0) throw std::domain_error("weighted_norm: rho must be >= 0");
  WeightedNormResult res;
  res.rho = rho;
  if (rho == 0.0) {
    for (int i = 0; i < grid.size(); ++i) {
      double a = std::abs(u[i]) * grid.weights[i];
      if (grid.centers[i] < 1.0)
        res.inner += a;
      else
        res.outer += a * G.values[i];
    }
    res.total = res.inner + res.outer;
    return res;
  }
  SpaceForm sf = classify(*G.manifold);
  int N = G.manifold->dimension();
  for (int i = 0; i < grid.size(); ++i) {
    if (u[i] == 0.0) continue;
    double r = grid.centers[i];
    // Integrand switches from the B_1(x0) indicator to G at d = 1; the
    // panel boundary sits exactly on the kink.
    double xk = kink_cosine(sf, rho, r, 1.0);
    double inner_mean = angular_mean(
        sf, N, rho, r, [&](double d) { return d < 1.0 ? 1.0 : 0.0; }, {xk});
    double outer_mean = angular_mean(
        sf, N, rho, r, [&](double d) { return d >= 1.0 ? G.at(d) : 0.0; },
        {xk});
    res.inner += std::abs(u[i]) * inner_mean * grid.weights[i];
    res.outer += std::abs(u[i]) * outer_mean * grid.weights[i];
  }
  res.total = res.inner + res.outer;
  return res;
}

double angular_refinement_error(const ModelManifold& manifold, double rho,
                                double r) {
  if (rho <= 0.0 || r <= 0.0)
    throw std::domain_error("angular_refinement_error: rho and r must be > 0");
  SpaceForm sf = classify(manifold);
  int N = manifold.dimension();
  auto probe = [](double d) { return std::exp(-d); };
  double base = angular_mean(sf, N, rho, r, probe, {});
  double fine = angular_mean(sf, N, rho, r, probe, {}, 2 * kAngularOrder);
  return std::abs(base - fine) / std::max(std::abs(fine), 1e-300);
}

std::vector<double> default_offset_sample(const ModelManifold& manifold,
                                          double r_max) {
  if (manifold.warping().kind() == Warping::Kind::custom) return {0.0};
  return {0.0, 1.0, 2.0, 4.0, 8.0, r_max / 2.0};
}

double sup_weighted_norm(const GreenProfile& G, const Vector& u,
                         const std::vector<double>& offsets) {
  double sup = 0.0;
  for (double rho : offsets)
    sup = std::max(sup, weighted_norm(G, u, rho).total);
  return sup;
}

}  // namespace fpme
