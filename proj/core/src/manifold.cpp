#include "fpme/manifold.hpp"

#include <cmath>
#include <stdexcept>

#include "fpme/quadrature.hpp"

namespace fpme {

Warping Warping::euclidean() {
  Warping w;
  w.kind_ = Kind::euclidean;
  w.name_ = "euclidean";
  w.c_ = 0.0;
  return w;
}

Warping Warping::hyperbolic(double c) {
  if (!(c > 0.0))
    throw std::invalid_argument("hyperbolic warping needs curvature_param > 0");
  Warping w;
  w.kind_ = Kind::hyperbolic;
  w.name_ = "hyperbolic";
  w.c_ = c;
  return w;
}

Warping Warping::custom(std::string name, std::function<double(double)> psi,
                        std::function<double(double)> dpsi,
                        std::function<double(double)> ddpsi) {
  Warping w;
  w.kind_ = Kind::custom;
  w.name_ = std::move(name);
  w.psi_ = std::move(psi);
  w.dpsi_ = std::move(dpsi);
  w.ddpsi_ = std::move(ddpsi);
  return w;
}

Warping Warping::named_custom(const std::string& name) {
  if (name == "sinh_cosh") {
    // psi = sinh(r) cosh(r) = sinh(2r)/2; constant curvature -4
    return custom(
        name, [](double r) { return 0.5 * std::sinh(2.0 * r); },
        [](double r) { return std::cosh(2.0 * r); },
        [](double r) { return 2.0 * std::sinh(2.0 * r); });
  }
  if (name == "cubic") {
    // psi = r + r^3; K(r) = -6r/(r + r^3), so K(1) = -3
    return custom(
        name, [](double r) { return r + r * r * r; },
        [](double r) { return 1.0 + 3.0 * r * r; },
        [](double r) { return 6.0 * r; });
  }
  throw std::invalid_argument("unknown custom warping: " + name);
}

double Warping::value(double r) const {
  switch (kind_) {
    case Kind::euclidean:
      return r;
    case Kind::hyperbolic: {
      double rc = std::sqrt(c_);
      return std::sinh(rc * r) / rc;
    }
    case Kind::custom:
      return psi_(r);
  }
  return 0.0;
}

double Warping::derivative(double r) const {
  switch (kind_) {
    case Kind::euclidean:
      return 1.0;
    case Kind::hyperbolic:
      return std::cosh(std::sqrt(c_) * r);
    case Kind::custom:
      return dpsi_(r);
  }
  return 0.0;
}

double Warping::second_derivative(double r) const {
  switch (kind_) {
    case Kind::euclidean:
      return 0.0;
    case Kind::hyperbolic: {
      double rc = std::sqrt(c_);
      return rc * std::sinh(rc * r);
    }
    case Kind::custom:
      return ddpsi_(r);
  }
  return 0.0;
}

ModelManifold::ModelManifold(int dimension, Warping warping)
    : dim_(dimension), warping_(std::move(warping)) {
  if (dim_ < 2)
    throw std::invalid_argument("model manifold dimension must be >= 2");
  omega_ = 2.0 * std::pow(M_PI, 0.5 * dim_) / std::tgamma(0.5 * dim_);
}

WarpingEval ModelManifold::warping_eval(double r) const {
  if (r < 0.0) throw std::domain_error("warping_eval: r must be >= 0");
  return {warping_.value(r), warping_.derivative(r),
          warping_.second_derivative(r)};
}

double ModelManifold::sectional_curvature_radial(double r) const {
  if (r < 0.0)
    throw std::domain_error("sectional_curvature_radial: r must be >= 0");
  // K = -psi''/psi is 0/0 at the pole; the limit is -psi'''(0).  A one-sided
  // difference of psi'' stands in for psi''' (approximate by construction).
  const double h = 1e-5;
  if (r < h) return -warping_.second_derivative(h) / h;
  return -warping_.second_derivative(r) / warping_.value(r);
}

double ModelManifold::sphere_area(double r) const {
  double psi = warping_.value(r);
  return omega_ * std::pow(psi, dim_ - 1);
}

double ModelManifold::ball_volume(double R) const {
  if (R < 0.0) throw std::domain_error("ball_volume: R must be >= 0");
  if (R == 0.0) return 0.0;
  int panels = std::max(64, static_cast<int>(R));
  double v = gauss_composite(
      [this](double r) { return std::pow(warping_.value(r), dim_ - 1); }, 0.0,
      R, panels);
  return omega_ * v;
}

void ModelManifold::check_admissible(double r_max) const {
  if (std::abs(warping_.value(0.0)) > 1e-12)
    throw std::invalid_argument("inadmissible warping: psi(0) != 0");
  if (std::abs(warping_.derivative(0.0) - 1.0) > 1e-12)
    throw std::invalid_argument("inadmissible warping: psi'(0) != 1");
  for (int k = 1; k <= 1000; ++k) {
    double r = r_max * k / 1000.0;
    if (!(warping_.value(r) > 0.0))
      throw std::invalid_argument(
          "inadmissible warping: psi <= 0 at r = " + std::to_string(r));
  }
}

}  // namespace fpme
