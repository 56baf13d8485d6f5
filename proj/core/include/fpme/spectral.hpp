#pragma once

#include <Eigen/Dense>
#include <mutex>

#include "fpme/field.hpp"
#include "fpme/grid.hpp"
#include "fpme/manifold.hpp"

namespace fpme {

// Finite-volume divergence-form radial Laplacian on the grid, symmetric
// under the weighted inner product <f,g>_w = sum f_i g_i w_i.  Stored in
// the symmetrized frame S = D^{1/2} L D^{-1/2} (D = diag(w)), which is a
// plain symmetric tridiagonal matrix.  Sign convention: represents -Delta,
// positive spectrum (zero-flux at r = 0, homogeneous Dirichlet at r_max).
struct TridiagonalOperator {
  Vector diag;     // n
  Vector offdiag;  // n-1, symmetrized frame

  // y = L x in the original (unsymmetrized) frame.
  Vector apply(const Vector& x, const RadialGrid& grid) const;
};

TridiagonalOperator assemble_laplacian(const RadialGrid& grid,
                                       const ModelManifold& manifold);

// Full eigendecomposition of the symmetrized operator.  Eigenvectors are
// orthonormal columns of `basis` in the Euclidean sense; in the original
// frame the eigenfunctions phi_j = D^{-1/2} basis_j are orthonormal under
// <.,.>_w.  apply_function computes f(L)u = D^{-1/2} V f(Lambda) V^T D^{1/2} u.
class SpectralDecomposition {
 public:
  SpectralDecomposition(const RadialGrid& grid, const ModelManifold& manifold);

  const Vector& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const RadialGrid& grid() const { return *grid_; }
  const ModelManifold& manifold() const { return *manifold_; }
  double lambda_min() const { return eigenvalues_[0]; }

  // phi_j at node i in the original frame.
  double eigenfunction(int j, int i) const {
    return basis_(i, j) / sqrt_w_[i];
  }

  Vector apply_function(const Vector& u,
                        const std::function<double(double)>& f) const;

  // e^{-tL} u; t = 0 returns u, t < 0 throws std::domain_error.
  Vector apply_heat(const Vector& u, double t) const;

  // Heat kernel column k(t, r_i; r_j) = [e^{-tL}(e_j / w_j)]_i; the discrete
  // Dirac at node j carries unit mass.  t <= 0 throws std::domain_error.
  Vector heat_kernel_column(double t, int j) const;
  double heat_kernel(double t, int i, int j) const;

 private:
  const RadialGrid* grid_;
  const ModelManifold* manifold_;
  Vector eigenvalues_;
  Eigen::MatrixXd basis_;
  Vector sqrt_w_;
};

// Spectral fractional power pair L^{+s}, L^{-s}, 0 < s < 1.  Exact spectral
// normalization, so apply(apply_inverse(u)) = u to roundoff.
class FractionalOperator {
 public:
  FractionalOperator(const SpectralDecomposition& decomposition, double s);

  double s() const { return s_; }
  const SpectralDecomposition& decomposition() const { return *decomposition_; }
  const RadialGrid& grid() const { return decomposition_->grid(); }
  const ModelManifold& manifold() const { return decomposition_->manifold(); }

  Vector apply(const Vector& u) const;          // L^{+s} u
  Vector apply_inverse(const Vector& u) const;  // L^{-s} u

  // Solve (I + h L^s) x = rhs through the eigenbasis.
  Vector resolvent(double h, const Vector& rhs) const;

  // Dense L^s in the original frame; built on first use (O(n^3) once) and
  // cached.  The Newton solver needs explicit entries for its Jacobian.
  const Eigen::MatrixXd& dense_power() const;

 private:
  const SpectralDecomposition* decomposition_;
  double s_;
  mutable std::once_flag dense_once_;
  mutable Eigen::MatrixXd dense_power_;
};

// Validates lambda^{-s} = (1/Gamma(s)) int_0^infty e^{-t lambda} t^{s-1} dt
// by adaptive log-substituted trapezoid quadrature; returns the relative
// error against the direct power.  Throws std::runtime_error with the
// achieved tolerance if refinement stalls.
double subordination_identity_check(double lambda, double s);

// lambda_1(B_R) * vol(B_R)^{2/N} for each radius, using the Dirichlet
// operator restricted to the cells inside R.  Radii leaving fewer than
// 8 cells are skipped (reported with pass=false and value NaN).
struct FaberKrahnRow {
  double radius;
  double product;  // lambda_1 * vol^{2/N}
  bool usable;
};
std::vector<FaberKrahnRow> faber_krahn_check(const ModelManifold& manifold,
                                             const RadialGrid& grid,
                                             const std::vector<double>& radii);

// sup over samples of k(t,0,r) * t^{N/2} * exp(r^2/((4+eps)t)), evaluated in
// log domain and restricted to kernel values above 1e-8 * k(t,0,0) (the
// deep tail is dominated by lattice dispersion, not the Gaussian).
double gaussian_bound_check(const SpectralDecomposition& decomposition,
                            const std::vector<double>& times,
                            const std::vector<double>& radii,
                            double eps = 0.5);

}  // namespace fpme
