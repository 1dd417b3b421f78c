#pragma once

#include <vector>

namespace mapl {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]. Nodes ascend and are exactly
/// antisymmetric (node[i] == -node[n-1-i]).
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre on [centre - half_width, centre + half_width]
/// with `panels` equal panels of `order` nodes each. Offsets from the centre
/// are antisymmetric, so mirroring the centre mirrors the nodes exactly.
QuadratureRule composite_gauss_legendre(double centre, double half_width, int panels, int order);

}  // namespace mapl
