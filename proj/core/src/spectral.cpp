#include "fpme/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fpme/errors.hpp"

namespace fpme {

Vector TridiagonalOperator::apply(const Vector& x,
                                  const RadialGrid& grid) const {
  int n = static_cast<int>(diag.size());
  Vector sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(grid.weights[i]);
  Vector xs = x.cwiseProduct(sw);
  Vector ys(n);
  for (int i = 0; i < n; ++i) {
    double v = diag[i] * xs[i];
    if (i > 0) v += offdiag[i - 1] * xs[i - 1];
    if (i + 1 < n) v += offdiag[i] * xs[i + 1];
    ys[i] = v;
  }
  return ys.cwiseQuotient(sw);
}

TridiagonalOperator assemble_laplacian(const RadialGrid& grid,
                                       const ModelManifold& manifold) {
  int n = grid.size();
  int N = manifold.dimension();
  double omega = manifold.sphere_constant();
  TridiagonalOperator op;
  op.diag = Vector::Zero(n);
  op.offdiag = Vector::Zero(n - 1);
  const auto& w = grid.weights;
  // Interior edge fluxes; the r=0 edge carries zero flux automatically
  // because psi(0) = 0.
  for (int i = 0; i + 1 < n; ++i) {
    double area = omega * std::pow(manifold.warping().value(grid.edges[i + 1]),
                                   N - 1);
    double c = area / (grid.centers[i + 1] - grid.centers[i]);
    op.diag[i] += c / w[i];
    op.diag[i + 1] += c / w[i + 1];
    op.offdiag[i] = -c / std::sqrt(w[i] * w[i + 1]);
  }
  // Homogeneous Dirichlet at r_max through the last cell's outer edge.
  double area = omega * std::pow(manifold.warping().value(grid.r_max), N - 1);
  op.diag[n - 1] += area / (grid.r_max - grid.centers[n - 1]) / w[n - 1];
  return op;
}

SpectralDecomposition::SpectralDecomposition(const RadialGrid& grid,
                                             const ModelManifold& manifold)
    : grid_(&grid), manifold_(&manifold) {
  TridiagonalOperator op = assemble_laplacian(grid, manifold);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(op.diag, op.offdiag,
                                Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error(
        "eigensolver failed on the radial operator (n = " +
        std::to_string(grid.size()) + ", warping = " +
        manifold.warping().name() + ")");
  eigenvalues_ = solver.eigenvalues();
  basis_ = solver.eigenvectors();
  if (!(eigenvalues_[0] > 0.0))
    throw std::runtime_error(
        "radial operator is not positive definite: lambda_1 = " +
        std::to_string(eigenvalues_[0]));
  sqrt_w_.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    sqrt_w_[i] = std::sqrt(grid.weights[i]);
}

Vector SpectralDecomposition::apply_function(
    const Vector& u, const std::function<double(double)>& f) const {
  Vector coeff = basis_.transpose() * u.cwiseProduct(sqrt_w_);
  for (int j = 0; j < coeff.size(); ++j) coeff[j] *= f(eigenvalues_[j]);
  return (basis_ * coeff).cwiseQuotient(sqrt_w_);
}

Vector SpectralDecomposition::apply_heat(const Vector& u, double t) const {
  if (t < 0.0) throw std::domain_error("apply_heat: t must be >= 0");
  if (t == 0.0) return u;
  return apply_function(u, [t](double lam) { return std::exp(-lam * t); });
}

Vector SpectralDecomposition::heat_kernel_column(double t, int j) const {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
  // e^{-tL} applied to the unit-mass discrete Dirac e_j / w_j.
  Vector coeff = basis_.row(j).transpose() * (1.0 / sqrt_w_[j]);
  for (int k = 0; k < coeff.size(); ++k)
    coeff[k] *= std::exp(-eigenvalues_[k] * t);
  return (basis_ * coeff).cwiseQuotient(sqrt_w_);
}

double SpectralDecomposition::heat_kernel(double t, int i, int j) const {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
  double acc = 0.0;
  for (int k = 0; k < eigenvalues_.size(); ++k)
    acc += std::exp(-eigenvalues_[k] * t) * basis_(i, k) * basis_(j, k);
  return acc / (sqrt_w_[i] * sqrt_w_[j]);
}

FractionalOperator::FractionalOperator(
    const SpectralDecomposition& decomposition, double s)
    : decomposition_(&decomposition), s_(s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("fractional exponent must satisfy 0 < s < 1");
}

Vector FractionalOperator::apply(const Vector& u) const {
  double s = s_;
  return decomposition_->apply_function(
      u, [s](double lam) { return std::pow(lam, s); });
}

Vector FractionalOperator::apply_inverse(const Vector& u) const {
  double s = s_;
  return decomposition_->apply_function(
      u, [s](double lam) { return std::pow(lam, -s); });
}

Vector FractionalOperator::resolvent(double h, const Vector& rhs) const {
  if (!(h > 0.0)) throw std::domain_error("resolvent: h must be > 0");
  double s = s_;
  return decomposition_->apply_function(
      rhs, [h, s](double lam) { return 1.0 / (1.0 + h * std::pow(lam, s)); });
}

const Eigen::MatrixXd& FractionalOperator::dense_power() const {
  std::call_once(dense_once_, [this] {
    const SpectralDecomposition& d = *decomposition_;
    const RadialGrid& grid = d.grid();
    int n = grid.size();
    // D^{-1/2} V Lambda^s V^T D^{1/2}
    Eigen::MatrixXd scaled = d.basis();
    for (int j = 0; j < n; ++j)
      scaled.col(j) *= std::pow(d.eigenvalues()[j], s_);
    dense_power_.noalias() = scaled * d.basis().transpose();
    for (int i = 0; i < n; ++i) {
      double wi = std::sqrt(grid.weights[i]);
      dense_power_.row(i) /= wi;
      dense_power_.col(i) *= wi;
    }
  });
  return dense_power_;
}

double subordination_identity_check(double lambda, double s) {
  if (!(lambda > 0.0))
    throw std::domain_error("subordination check: lambda must be > 0");
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("subordination check: s must lie in (0, 1)");
  // lambda^{-s} = (1/Gamma(s)) int_0^inf e^{-t lambda} t^{s-1} dt with
  // t = e^y: integrand e^{-lambda e^y + s y}, doubly-exponential right
  // tail, rate-s left tail.  Trapezoid + halving; superalgebraic in h.
  double y_lo = -std::log(lambda) - 45.0 / s;
  double y_hi = std::log(45.0 / lambda) + 2.0;
  auto integrand = [&](double y) {
    return std::exp(-lambda * std::exp(y) + s * y);
  };
  double target = std::pow(lambda, -s) * std::tgamma(s);
  double prev = 0.0;
  int steps = 64;
  double value = 0.0;
  for (int pass = 0; pass < 14; ++pass, steps *= 2) {
    double h = (y_hi - y_lo) / steps;
    double acc = 0.5 * (integrand(y_lo) + integrand(y_hi));
    for (int k = 1; k < steps; ++k) acc += integrand(y_lo + k * h);
    value = acc * h;
    if (pass > 0 && std::abs(value - prev) <= 1e-13 * std::abs(target))
      return std::abs(value / target - 1.0);
    prev = value;
  }
  throw std::runtime_error(
      "subordination quadrature did not converge; achieved " +
      std::to_string(std::abs(value - prev) / std::abs(target)));
}

std::vector<FaberKrahnRow> faber_krahn_check(const ModelManifold& manifold,
                                             const RadialGrid& grid,
                                             const std::vector<double>& radii) {
  TridiagonalOperator full = assemble_laplacian(grid, manifold);
  int n = grid.size();
  int N = manifold.dimension();
  double omega = manifold.sphere_constant();
  std::vector<FaberKrahnRow> rows;
  for (double R : radii) {
    // Snap to the nearest grid edge and truncate the operator there.
    int k = 0;
    double best = grid.r_max;
    for (int i = 1; i <= n; ++i) {
      double d = std::abs(grid.edges[i] - R);
      if (d < best) {
        best = d;
        k = i;
      }
    }
    if (k < 8 || k >= n) {
      rows.push_back({R, std::numeric_limits<double>::quiet_NaN(), false});
      continue;
    }
    double Re = grid.edges[k];
    Vector diag = full.diag.head(k);
    Vector off = full.offdiag.head(k - 1);
    // Replace the interior coupling through edge k by the Dirichlet term.
    double area = omega * std::pow(manifold.warping().value(Re), N - 1);
    double c_old = area / (grid.centers[k] - grid.centers[k - 1]);
    double c_bnd = area / (Re - grid.centers[k - 1]);
    diag[k - 1] += (c_bnd - c_old) / grid.weights[k - 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigensolver failed on the truncated ball");
    double lam1 = solver.eigenvalues()[0];
    double vol = 0.0;
    for (int i = 0; i < k; ++i) vol += grid.weights[i];
    rows.push_back({Re, lam1 * std::pow(vol, 2.0 / N), true});
  }
  return rows;
}

double gaussian_bound_check(const SpectralDecomposition& decomposition,
                            const std::vector<double>& times,
                            const std::vector<double>& radii, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("gaussian bound: eps must be > 0");
  const RadialGrid& grid = decomposition.grid();
  int N = decomposition.manifold().dimension();
  double sup = 0.0;
  for (double t : times) {
    Vector col = decomposition.heat_kernel_column(t, 0);
    double peak = col[0];
    for (double r : radii) {
      // nearest cell center
      int best = 0;
      for (int i = 1; i < grid.size(); ++i)
        if (std::abs(grid.centers[i] - r) < std::abs(grid.centers[best] - r))
          best = i;
      double k = col[best];
      // Deep-tail values are lattice dispersion, not Gaussian decay; only
      // trust the kernel down to 1e-8 of its on-diagonal peak.
      if (!(k > 1e-8 * peak)) continue;
      double ri = grid.centers[best];
      double logval = std::log(k) + 0.5 * N * std::log(t) +
                      ri * ri / ((4.0 + eps) * t);
      sup = std::max(sup, std::exp(logval));
    }
  }
  return sup;
}

}  // namespace fpme
