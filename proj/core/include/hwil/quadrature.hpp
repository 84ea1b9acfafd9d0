#pragma once

#include <vector>

namespace hwil {

/// Nodes and weights of a quadrature rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `points` nodes (Newton iteration on P_n).
QuadratureRule gauss_legendre(int points);

/// Composite Gauss-Legendre on [-1, 1] over a mesh graded geometrically
/// (ratio 1/2) toward both endpoints: cells [1 - 2^-k, 1 - 2^-(k+1)] for
/// k < levels, then the end cell [1 - 2^-levels, 1], mirrored.
/// Open: no node sits on an endpoint.
QuadratureRule graded_rule(int levels, int points);

struct QuadraturePlan {
  int levels = 24;
  int points = 16;
  double tol = 1e-6;  // relative to the modulus scale of each entry
};

}  // namespace hwil
