#include "mapl/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mapl {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Tricomi initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) <= 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule composite_gauss_legendre(double centre, double half_width, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: need at least one panel");
  if (!(half_width > 0.0)) throw std::invalid_argument("composite_gauss_legendre: half_width must be positive");
  const QuadratureRule base = gauss_legendre(order);
  const double panel_half = half_width / panels;
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(rule.nodes.capacity());
  for (int k = 0; k < panels; ++k) {
    // panel centre offset: -half_width + (2k+1) panel_half; antisymmetric in k
    const double panel_offset = (2.0 * k + 1.0 - panels) * panel_half;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(centre + (panel_offset + panel_half * base.nodes[i]));
      rule.weights.push_back(panel_half * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace mapl
