#include "hwil/quadrature.hpp"

#include <cmath>

#include "hwil/error.hpp"
#include "hwil/geometry.hpp"

namespace hwil {

QuadratureRule gauss_legendre(int points) {
  if (points < 1) throw Error("gauss_legendre: need at least one point");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(points));
  rule.weights.resize(static_cast<std::size_t>(points));
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (points == 1) p0 = 1.0;
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[points - 1 - i] = x;
    rule.weights[points - 1 - i] = w;
  }
  return rule;
}

QuadratureRule graded_rule(int levels, int points) {
  if (levels < 1) throw Error("graded_rule: need at least one level");
  const QuadratureRule base = gauss_legendre(points);
  std::vector<std::pair<double, double>> cells;  // on [0, 1]
  for (int k = 0; k < levels; ++k) cells.emplace_back(1.0 - std::ldexp(1.0, -k), 1.0 - std::ldexp(1.0, -k - 1));
  cells.emplace_back(1.0 - std::ldexp(1.0, -levels), 1.0);

  QuadratureRule out;
  for (int side : {-1, 1}) {
    for (const auto& [lo, hi] : cells) {
      const double rad = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        // Distance to the endpoint is computed directly to keep nodes
        // near +-1 accurate.
        const double gap = (1.0 - hi) + rad * (1.0 - base.nodes[i]);
        out.nodes.push_back(side * (1.0 - gap));
        out.weights.push_back(rad * base.weights[i]);
      }
    }
  }
  return out;
}

}  // namespace hwil
