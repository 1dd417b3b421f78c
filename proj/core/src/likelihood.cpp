#include "mapl/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mapl/special_functions.hpp"

namespace mapl {

namespace {

// sign(0) = 0 so both statistics vanish exactly at their centring point.
double signed_root(double displacement, double log_term) {
  if (displacement == 0.0) return 0.0;
  const double root = std::sqrt(log_term);
  return displacement > 0.0 ? root : -root;
}

}  // namespace

void ScenarioParams::validate() const {
  if (p < 2 || p >= n) throw std::invalid_argument("scenario requires 2 <= p < n");
  if (!(std::fabs(rho) < 1.0)) throw std::invalid_argument("scenario requires |rho| < 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("scenario requires 0 < alpha < 1");
  if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("scenario requires finite d >= 0");
}

double r2(double delta, double y, const ScenarioParams& params) {
  const double nu = params.residual_df();
  const double t = delta * delta / (nu * y * y);
  return signed_root(delta, params.n * std::log1p(t));
}

double r1(double delta, double x, double y, const ScenarioParams& params) {
  const double nu = params.residual_df();
  const double e = delta - params.rho * x;
  const double t = e * e / ((1.0 - params.rho * params.rho) * (x * x + nu * y * y));
  return signed_root(e, params.n * std::log1p(t));
}

double information_criterion_difference(double x, double y, const ScenarioParams& params) {
  const double nu = params.residual_df();
  return params.n * std::log1p(x * x / (nu * y * y)) - params.d;
}

double model_weight(double x, double y, const ScenarioParams& params) {
  // 1 / (1 + exp{(AIC_1 - AIC_2)/2}), written to stay finite for either sign.
  const double half_diff = 0.5 * information_criterion_difference(x, y, params);
  if (half_diff > 0.0) {
    const double e = std::exp(-half_diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(half_diff));
}

double h(double delta, double x, double y, const ScenarioParams& params) {
  const double w1 = model_weight(x, y, params);
  return w1 * std_normal_cdf(r1(delta, x, y, params)) +
         (1.0 - w1) * std_normal_cdf(r2(delta, y, params));
}

double h(const StandardizedPoint& point, const ScenarioParams& params) {
  return h(point.delta, point.x, point.y, params);
}

DeltaSolution solve_delta_detailed(double u, double x, double y, const ScenarioParams& params,
                                   double value_tol) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("solve_delta: u must lie in (0, 1)");
  if (!(y > 0.0)) throw std::domain_error("solve_delta: y must be positive");

  // h depends on delta through delta / y, so the natural step scale is y.
  // The weight and the r2 pieces do not depend on delta; hoist them.
  const double w1 = model_weight(x, y, params);
  auto hd = [&](double delta) {
    return w1 * std_normal_cdf(r1(delta, x, y, params)) +
           (1.0 - w1) * std_normal_cdf(r2(delta, y, params));
  };
  RootOptions options;
  options.start = 0.0;
  options.initial_step = y;
  // |delta| limit of 1e6 on the standardized scale, i.e. in units of y.
  options.bracket_limit = 1e6 * std::max(1.0, y);
  options.value_tol = value_tol;
  const RootResult r = solve_increasing(hd, u, options);
  return {r.root, r.residual, r.evaluations};
}

double solve_delta(double u, double x, double y, const ScenarioParams& params) {
  return solve_delta_detailed(u, x, y, params).delta;
}

}  // namespace mapl
