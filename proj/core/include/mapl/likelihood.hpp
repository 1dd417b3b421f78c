#pragma once

// Signed-root log-likelihood ratio statistics for the full model (M2) and the
// constrained model tau = 0 (M1), the information-criterion weight of M1,
// the weight-averaged endpoint function h and its inverse in delta.
//
// Arguments are in standardized form:
//   delta = (theta_hat - theta) / (sigma v_theta^{1/2})
//   x     = tau_hat / (sigma v_tau^{1/2})
//   y     = sigma_hat / sigma
// Every statistic depends on (delta, x, y) only through delta / y and x / y,
// so passing sigma_hat itself as y (the sigma = 1 scale) gives the same value.

#include "mapl/root_finding.hpp"

namespace mapl {

/// Known quantities of the two-model scenario. d is the per-parameter penalty
/// multiplier of the information criterion (d = 2 is AIC).
struct ScenarioParams {
  int n = 0;
  int p = 0;
  double rho = 0.0;
  double alpha = 0.05;
  double d = 2.0;

  int residual_df() const noexcept { return n - p; }

  /// Throws std::invalid_argument when 2 <= p < n, |rho| < 1, 0 < alpha < 1,
  /// d >= 0 does not hold.
  void validate() const;
};

struct StandardizedPoint {
  double delta = 0.0;
  double x = 0.0;
  double y = 1.0;
};

/// gamma = tau / (sigma v_tau^{1/2}); the only unknown the exact coverage and
/// expected length depend on.
struct GammaParam {
  double value = 0.0;
};

/// sign(delta) [n log{1 + delta^2 / ((n-p) y^2)}]^{1/2}.
double r2(double delta, double y, const ScenarioParams& params);

/// sign(delta - rho x) (n log[1 + (delta - rho x)^2 / {(1-rho^2)(x^2 + (n-p) y^2)}])^{1/2}.
double r1(double delta, double x, double y, const ScenarioParams& params);

/// Weight of M1: 1 / (1 + {1 + x^2/((n-p) y^2)}^{n/2} exp(-d/2)).
double model_weight(double x, double y, const ScenarioParams& params);

/// AIC_1 - AIC_2 = n log{1 + x^2/((n-p) y^2)} - d. Positive means M2 wins.
double information_criterion_difference(double x, double y, const ScenarioParams& params);

/// w1 Phi(r1) + (1 - w1) Phi(r2); strictly increasing in delta.
double h(double delta, double x, double y, const ScenarioParams& params);
double h(const StandardizedPoint& point, const ScenarioParams& params);

struct DeltaSolution {
  double delta = 0.0;
  double residual = 0.0;  // h(delta, x, y) - u
  int evaluations = 0;
};

/// Default tolerance on |h - u| for solve_delta.
inline constexpr double kDeltaValueTolerance = 1e-13;

/// Solves h(delta, x, y) = u in delta. Throws SolverError if the bracket
/// expansion passes |delta| = 1e6 (in units of y when y > 1).
DeltaSolution solve_delta_detailed(double u, double x, double y, const ScenarioParams& params,
                                   double value_tol = kDeltaValueTolerance);
double solve_delta(double u, double x, double y, const ScenarioParams& params);

}  // namespace mapl
