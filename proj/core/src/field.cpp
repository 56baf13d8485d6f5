#include "fpme/field.hpp"

#include <cmath>
#include <stdexcept>

#include "fpme/quadrature.hpp"

namespace fpme {

Vector sample_field(const RadialGrid& grid,
                    const std::function<double(double)>& f) {
  Vector u(grid.size());
  for (int i = 0; i < grid.size(); ++i) u[i] = f(grid.centers[i]);
  return u;
}

namespace {

// omega int_a^b f(r) psi^{N-1} dr, one Gauss panel.
double cell_integral(const ModelManifold& m, double a, double b,
                     const std::function<double(double)>& f) {
  int N = m.dimension();
  return m.sphere_constant() *
         gauss_panel(
             [&](double r) {
               return f(r) * std::pow(m.warping().value(r), N - 1);
             },
             a, b);
}

}  // namespace

Vector project_field(const ModelManifold& manifold, const RadialGrid& grid,
                     const std::function<double(double)>& f) {
  Vector u(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    u[i] = cell_integral(manifold, grid.edges[i], grid.edges[i + 1], f) /
           grid.weights[i];
  return u;
}

Vector ball_indicator(const ModelManifold& manifold, const RadialGrid& grid,
                      double R) {
  if (!(R > 0.0) || R > grid.r_max)
    throw std::invalid_argument("ball_indicator: R outside (0, r_max]");
  Vector u = Vector::Zero(grid.size());
  auto one = [](double) { return 1.0; };
  for (int i = 0; i < grid.size(); ++i) {
    double a = grid.edges[i], b = grid.edges[i + 1];
    if (b <= R) {
      u[i] = 1.0;
    } else if (a < R) {
      // partially covered cell carries exactly its volume fraction
      u[i] = cell_integral(manifold, a, R, one) / grid.weights[i];
    }
  }
  return u;
}

Vector power_tail_field(const ModelManifold& manifold, const RadialGrid& grid,
                        double a) {
  (void)manifold;
  if (!(a > 0.0)) throw std::invalid_argument("power_tail_field: a <= 0");
  // Pointwise sampling of min(1, r^-a): the plateau is exact, and these
  // data enter threshold calibrations, not mass-conservation checks.
  return sample_field(grid, [a](double r) {
    return r <= 1.0 ? 1.0 : std::pow(r, -a);
  });
}

double bump(double x) {
  double y = 1.0 - x * x;
  if (y <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / y);
}

double integral(const RadialGrid& grid, const Vector& u) {
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) acc += u[i] * grid.weights[i];
  return acc;
}

double lp_norm(const RadialGrid& grid, const Vector& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    acc += std::pow(std::abs(u[i]), p) * grid.weights[i];
  return std::pow(acc, 1.0 / p);
}

double linf_norm(const Vector& u) {
  return u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace fpme
