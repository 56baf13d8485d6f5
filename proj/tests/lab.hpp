#pragma once

// Shared test fixture: a manifold + grid + eigendecomposition + fractional
// operator bundle built once per (geometry, s) and reused across test cases.
// Instances live on the heap so the internal grid/manifold pointers held by
// SpectralDecomposition and GreenProfile stay valid.

#include <utility>

#include "fpme/green.hpp"
#include "fpme/spectral.hpp"

namespace fpme::testlab {

struct Lab {
  ModelManifold manifold;
  RadialGrid grid;
  SpectralDecomposition dec;
  FractionalOperator op;

  Lab(int N, Warping w, double r_max, int n, double s, double grading = 1.0)
      : manifold(N, std::move(w)),
        grid(build_grid(manifold, r_max, n, grading)),
        dec(grid, manifold),
        op(dec, s) {}

  Lab(const Lab&) = delete;
  Lab& operator=(const Lab&) = delete;
};

struct GreenLab : Lab {
  GreenProfile G;

  GreenLab(int N, Warping w, double r_max, int n, double s,
           double grading = 1.0)
      : Lab(N, std::move(w), r_max, n, s, grading), G(green_function(op)) {}
};

}  // namespace fpme::testlab
