#pragma once

#include <vector>

#include "fpme/manifold.hpp"

namespace fpme {

// Cell-centered finite-volume grid on [0, r_max].  Cell i occupies
// [edges[i], edges[i+1]] with center r[i] at the midpoint; weights
// w[i] = omega_{N-1} int_cell psi^{N-1} dr are the exact cell volumes
// (8-point Gauss per cell), so sum(w) = ball_volume(r_max) to quadrature
// accuracy.  grading in [1, 2] grows cell widths geometrically away from
// the origin (grading = 1 gives the uniform grid).
struct RadialGrid {
  double r_max = 0.0;
  std::vector<double> edges;    // n+1 edges, edges[0] = 0, edges[n] = r_max
  std::vector<double> centers;  // n cell centers
  std::vector<double> weights;  // n volume weights

  int size() const { return static_cast<int>(centers.size()); }
  double cell_width(int i) const { return edges[i + 1] - edges[i]; }
};

// Requires n >= 16 and grading in [1, 2]; throws std::invalid_argument
// otherwise.  Runs the manifold admissibility check over [0, r_max].
RadialGrid build_grid(const ModelManifold& manifold, double r_max, int n,
                      double grading = 1.0);

}  // namespace fpme
