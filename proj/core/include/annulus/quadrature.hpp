#pragma once

#include <vector>

namespace annulus {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the `order`-point Gauss-Legendre rule (order >= 1).
const GaussRule& gauss_legendre(int order);

}  // namespace annulus
