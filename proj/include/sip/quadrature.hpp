#pragma once

#include <vector>

namespace sip {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree
/// 2n - 1. Nodes ascending.
QuadratureRule gauss_legendre(int n);

}  // namespace sip
