#pragma once

#include <vector>

namespace lifts {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule mapped to [a, b]; exact for polynomials of
/// degree 2n - 1.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

}  // namespace lifts
