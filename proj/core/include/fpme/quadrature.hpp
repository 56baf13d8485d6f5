#pragma once

#include <functional>
#include <vector>

namespace fpme {

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order (thread-safe).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

// int_a^b f, single Gauss panel of the given order.
double gauss_panel(const std::function<double(double)>& f, double a, double b,
                   int order = 8);

// Composite rule: [a, b] split into `panels` equal pieces.
double gauss_composite(const std::function<double(double)>& f, double a,
                       double b, int panels, int order = 8);

}  // namespace fpme
