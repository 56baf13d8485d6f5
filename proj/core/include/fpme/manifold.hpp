#pragma once

#include <functional>
#include <string>

namespace fpme {

// Rotationally symmetric model manifold: R^N in polar form with the metric
// dr^2 + psi(r)^2 dS^2.  Admissibility: psi(0) = 0, psi'(0) = 1, psi > 0 on
// (0, r_max].  Radial sectional curvature is K(r) = -psi''(r)/psi(r).
class Warping {
 public:
  enum class Kind { euclidean, hyperbolic, custom };

  static Warping euclidean();
  // psi(r) = sinh(sqrt(c) r)/sqrt(c), constant curvature -c (c > 0).
  static Warping hyperbolic(double curvature_param);
  // Custom warpings must supply psi'' analytically; numerical
  // differentiation of user callables is deliberately not offered.
  static Warping custom(std::string name,
                        std::function<double(double)> psi,
                        std::function<double(double)> dpsi,
                        std::function<double(double)> ddpsi);
  // Built-in named test warpings: "sinh_cosh" (psi = sinh r cosh r,
  // K = -4) and "cubic" (psi = r + r^3, K(1) = -3).
  static Warping named_custom(const std::string& name);

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;

  Kind kind() const { return kind_; }
  // Hyperbolic curvature parameter c; 0 for Euclidean, unset for custom.
  double curvature_param() const { return c_; }
  bool is_space_form() const { return kind_ != Kind::custom; }
  const std::string& name() const { return name_; }

 private:
  Warping() = default;
  Kind kind_ = Kind::euclidean;
  double c_ = 0.0;
  std::string name_;
  std::function<double(double)> psi_, dpsi_, ddpsi_;
};

struct WarpingEval {
  double psi;
  double dpsi;
  double ddpsi;
};

class ModelManifold {
 public:
  ModelManifold(int dimension, Warping warping);

  int dimension() const { return dim_; }
  const Warping& warping() const { return warping_; }

  // (psi, psi', psi'') at r >= 0; throws std::domain_error for r < 0.
  WarpingEval warping_eval(double r) const;

  // K(r) = -psi''/psi.  At r = 0 the 0/0 limit -psi'''(0) is approximated
  // by a one-sided finite difference (approximate by construction).
  double sectional_curvature_radial(double r) const;

  // omega_{N-1} = 2 pi^{N/2} / Gamma(N/2), area of the unit (N-1)-sphere.
  double sphere_constant() const { return omega_; }
  // omega_{N-1} psi(r)^{N-1}
  double sphere_area(double r) const;
  // omega_{N-1} int_0^R psi^{N-1} dr by composite Gauss quadrature.
  double ball_volume(double R) const;

  // Verifies psi(0) = 0, psi'(0) = 1 and psi > 0 on a sample of (0, r_max];
  // throws std::invalid_argument naming the violated condition.
  void check_admissible(double r_max) const;

 private:
  int dim_;
  Warping warping_;
  double omega_;
};

}  // namespace fpme
