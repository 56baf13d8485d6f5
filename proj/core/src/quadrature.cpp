#include "fpme/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fpme {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  // Newton on P_n from the asymptotic root guess; converges in ~4 steps.
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[k] = -x;
    gl.nodes[n - 1 - k] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.weights[k] = w;
    gl.weights[n - 1 - k] = w;
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b,
                   int order) {
  const GaussLegendre& gl = gauss_legendre(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < order; ++i)
    acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return acc * half;
}

double gauss_composite(const std::function<double(double)>& f, double a,
                       double b, int panels, int order) {
  double acc = 0.0, h = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    acc += gauss_panel(f, a + p * h, a + (p + 1) * h, order);
  return acc;
}

}  // namespace fpme
