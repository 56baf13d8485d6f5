#include "fpme/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "fpme/quadrature.hpp"

namespace fpme {

RadialGrid build_grid(const ModelManifold& manifold, double r_max, int n,
                      double grading) {
  if (!(r_max > 0.0)) throw std::invalid_argument("build_grid: r_max <= 0");
  if (n < 16) throw std::invalid_argument("build_grid: need n >= 16 cells");
  if (!(grading >= 1.0 && grading <= 2.0))
    throw std::invalid_argument("build_grid: grading must lie in [1, 2]");
  manifold.check_admissible(r_max);

  RadialGrid grid;
  grid.r_max = r_max;
  grid.edges.resize(n + 1);
  if (grading == 1.0) {
    for (int i = 0; i <= n; ++i) grid.edges[i] = r_max * i / n;
  } else {
    // Geometric widths h_i = h0 * grading^i, finest at the origin.
    double h0 = r_max * (grading - 1.0) / (std::pow(grading, n) - 1.0);
    grid.edges[0] = 0.0;
    double h = h0;
    for (int i = 0; i < n; ++i) {
      grid.edges[i + 1] = grid.edges[i] + h;
      h *= grading;
    }
  }
  grid.edges[n] = r_max;

  grid.centers.resize(n);
  grid.weights.resize(n);
  int N = manifold.dimension();
  for (int i = 0; i < n; ++i) {
    grid.centers[i] = 0.5 * (grid.edges[i] + grid.edges[i + 1]);
    grid.weights[i] =
        manifold.sphere_constant() *
        gauss_panel(
            [&](double r) {
              return std::pow(manifold.warping().value(r), N - 1);
            },
            grid.edges[i], grid.edges[i + 1]);
  }
  return grid;
}

}  // namespace fpme
