#pragma once

#include <Eigen/Dense>
#include <functional>

#include "fpme/grid.hpp"

namespace fpme {

// A radial scalar field is just its vector of cell values; the grid it
// lives on travels alongside.  Convenience constructors below sample or
// project analytic data onto the grid.
using Vector = Eigen::VectorXd;

// Pointwise sample f(r_i) at cell centers.
Vector sample_field(const RadialGrid& grid,
                    const std::function<double(double)>& f);

// Volume-average projection: cell value = int_cell f psi^{N-1} / w_i,
// 8-point Gauss per cell.  Exact-mass representation of integrable data.
Vector project_field(const ModelManifold& manifold, const RadialGrid& grid,
                     const std::function<double(double)>& f);

// Indicator of the ball {r < R}, projected so that partially covered
// cells carry exactly their geometric volume fraction.  sum(w .* u) equals
// ball_volume(R) to quadrature accuracy regardless of grid alignment.
Vector ball_indicator(const ModelManifold& manifold, const RadialGrid& grid,
                      double R);

// Power-tail datum: 1 on {r <= 1}, r^{-a} outside.  The unit-ball plateau
// uses the exact partial-cell projection, the tail is volume-averaged.
Vector power_tail_field(const ModelManifold& manifold, const RadialGrid& grid,
                        double a);

// Smooth compactly supported bump exp(1 - 1/(1 - x^2)) for |x| < 1, 0 else.
double bump(double x);

// Integrals and norms against the volume weights.
double integral(const RadialGrid& grid, const Vector& u);
double lp_norm(const RadialGrid& grid, const Vector& u, double p);
double linf_norm(const Vector& u);

}  // namespace fpme
