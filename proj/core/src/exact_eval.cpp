#include "mapl/exact_eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mapl/parallel.hpp"
#include "mapl/quadrature.hpp"
#include "mapl/root_finding.hpp"
#include "mapl/special_functions.hpp"

namespace mapl {

namespace {

struct Integrals {
  double coverage = 0.0;
  double length_factor = 0.0;
};

QuadratureRule panel_rule(double centre, double half_width, int nodes, int panel_order) {
  const int order = std::min(panel_order, nodes);
  const int panels = (nodes + order - 1) / order;
  return composite_gauss_legendre(centre, half_width, panels, order);
}

Integrals integrate(double gamma, const ScenarioParams& params, int x_nodes, int y_nodes,
                    const QuadratureConfig& q) {
  const DegreesOfFreedom nu(params.residual_df());
  const double y_lo = scaled_chi_quantile(q.y_lower_tail, nu);
  const double y_hi = scaled_chi_quantile(1.0 - q.y_upper_tail, nu);
  QuadratureRule y_rule = panel_rule(0.5 * (y_lo + y_hi), 0.5 * (y_hi - y_lo), y_nodes, q.panel_order);
  for (std::size_t j = 0; j < y_rule.size(); ++j) {
    y_rule.weights[j] *= scaled_chi_density(y_rule.nodes[j], nu);
  }
  const QuadratureRule x_rule = panel_rule(gamma, q.x_halfwidth, x_nodes, q.panel_order);

  const double upper_target = 1.0 - params.alpha / 2.0;
  const double lower_target = params.alpha / 2.0;
  const double cond_sd = std::sqrt(1.0 - params.rho * params.rho);

  std::vector<double> coverage_part(x_rule.size(), 0.0);
  std::vector<double> length_part(x_rule.size(), 0.0);
  parallel_for(x_rule.size(), [&](std::size_t i) {
    const double x = x_rule.nodes[i];
    // (theta_hat - theta)/(sigma v_theta^{1/2}) | x  ~  N(rho (x - gamma), 1 - rho^2)
    const double cond_mean = params.rho * (x - gamma);
    double cov = 0.0, len = 0.0;
    for (std::size_t j = 0; j < y_rule.size(); ++j) {
      const double y = y_rule.nodes[j];
      const double d_hi = solve_delta_detailed(upper_target, x, y, params, q.solver_tol).delta;
      const double d_lo = solve_delta_detailed(lower_target, x, y, params, q.solver_tol).delta;
      const double inner = std_normal_cdf((d_hi - cond_mean) / cond_sd) -
                           std_normal_cdf((d_lo - cond_mean) / cond_sd);
      cov += y_rule.weights[j] * inner;
      len += y_rule.weights[j] * (d_hi - d_lo);
    }
    const double wx = x_rule.weights[i] * std_normal_pdf(x - gamma);
    coverage_part[i] = wx * cov;
    length_part[i] = wx * len;
  });

  Integrals out;
  for (std::size_t i = 0; i < x_rule.size(); ++i) {
    out.coverage += coverage_part[i];
    out.length_factor += length_part[i];
  }
  return out;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (x_nodes < 16 || y_nodes < 16) throw std::invalid_argument("quadrature needs at least 16 nodes per axis");
  if (panel_order < 2) throw std::invalid_argument("panel_order must be >= 2");
  if (!(x_halfwidth >= 6.0)) throw std::invalid_argument("x_halfwidth must be >= 6");
  if (!(y_lower_tail > 0.0 && y_lower_tail < 0.5) || !(y_upper_tail > 0.0 && y_upper_tail < 0.5)) {
    throw std::invalid_argument("y truncation tails must lie in (0, 0.5)");
  }
  if (!(solver_tol > 0.0)) throw std::invalid_argument("solver_tol must be positive");
}

QuadratureConfig QuadratureConfig::doubled() const {
  QuadratureConfig c = *this;
  c.x_nodes *= 2;
  c.y_nodes *= 2;
  return c;
}

QuadratureConfig QuadratureConfig::halved() const {
  QuadratureConfig c = *this;
  c.x_nodes /= 2;
  c.y_nodes /= 2;
  return c;
}

PointEvaluation evaluate_point(double gamma, const ScenarioParams& params, const QuadratureConfig& q) {
  params.validate();
  q.validate();
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");

  const Integrals full = integrate(gamma, params, q.x_nodes, q.y_nodes, q);
  PointEvaluation out{gamma, full.coverage, full.length_factor, 0.0, 0.0};
  if (q.estimate_error) {
    const Integrals coarse = integrate(gamma, params, q.x_nodes / 2, q.y_nodes / 2, q);
    out.coverage_error = std::fabs(full.coverage - coarse.coverage);
    out.length_factor_error = std::fabs(full.length_factor - coarse.length_factor);
    if (out.coverage_error > q.error_tolerance) {
      std::ostringstream msg;
      msg << "coverage quadrature did not converge at gamma = " << gamma << ": node-halving changes it by "
          << out.coverage_error << " (tolerance " << q.error_tolerance << ")";
      throw QuadratureError(msg.str(), out.coverage_error);
    }
  }
  return out;
}

double coverage_probability(double gamma, const ScenarioParams& params, const QuadratureConfig& q) {
  return evaluate_point(gamma, params, q).coverage;
}

double expected_length_factor(double gamma, const ScenarioParams& params, const QuadratureConfig& q) {
  return evaluate_point(gamma, params, q).length_factor;
}

double scaled_length_denominator(const ScenarioParams& params, double c_min) {
  if (!(c_min > 0.0 && c_min < 1.0)) throw std::invalid_argument("c_min must lie in (0, 1)");
  const DegreesOfFreedom nu(params.residual_df());
  return 2.0 * student_t_quantile(0.5 * (c_min + 1.0), nu) * scaled_chi_mean(nu);
}

double scaled_expected_length(double gamma, const ScenarioParams& params, double c_min,
                              const QuadratureConfig& q) {
  const double denominator = scaled_length_denominator(params, c_min);
  return expected_length_factor(gamma, params, q) / denominator;
}

MinCoverage min_coverage(const ScenarioParams& params, const QuadratureConfig& q, double gamma_max) {
  params.validate();
  q.validate();
  if (!(gamma_max >= 10.0)) throw std::invalid_argument("min_coverage: gamma_max must be >= 10");

  QuadratureConfig search = q;
  search.estimate_error = false;
  auto coverage_at = [&](double g) { return integrate(g, params, search.x_nodes, search.y_nodes, search).coverage; };

  const int steps = static_cast<int>(std::ceil(gamma_max / kMinCoverageGridStep - 1e-9));
  double best_gamma = 0.0;
  double best = coverage_at(0.0);
  for (int k = 1; k <= steps; ++k) {
    const double g = std::min(gamma_max, k * kMinCoverageGridStep);
    const double c = coverage_at(g);
    if (c < best) {
      best = c;
      best_gamma = g;
    }
  }

  const double lo = std::max(0.0, best_gamma - kMinCoverageGridStep);
  const double hi = std::min(gamma_max, best_gamma + kMinCoverageGridStep);
  const MinimizeResult refined = golden_section_minimize(coverage_at, lo, hi, kMinCoverageGammaTol);
  MinCoverage out{best, best_gamma, gamma_max};
  if (refined.minimum < best) {
    out.c_min = refined.minimum;
    out.gamma_at_min = refined.argmin;
  }
  if (q.estimate_error) {
    // confirm the reported minimum meets the accuracy target
    out.c_min = std::min(out.c_min, evaluate_point(out.gamma_at_min, params, q).coverage);
  }
  return out;
}

double corollary1_bound(int n, int p, double alpha) {
  if (p < 1 || p >= n) throw std::invalid_argument("corollary1_bound requires 1 <= p < n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const double z = std_normal_quantile(1.0 - alpha / 2.0);
  const double nu = n - p;
  const double arg = std::sqrt(nu * std::expm1(z * z / n));
  return 2.0 * student_t_cdf(arg, DegreesOfFreedom(n - p)) - 1.0;
}

double corollary1_bound(const ScenarioParams& params) {
  return corollary1_bound(params.n, params.p, params.alpha);
}

double asymptotic_coverage_limit(double r, double alpha) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("p/n ratio must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const double z = std_normal_quantile(1.0 - alpha / 2.0);
  return 2.0 * std_normal_cdf(std::sqrt(1.0 - r) * z) - 1.0;
}

double calibrate_d(double u, int n, int p) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("calibrate_d: u must lie in (0, 1)");
  if (p < 1 || p >= n) throw std::invalid_argument("calibrate_d requires 1 <= p < n");
  const double nu = n - p;
  const double t = student_t_quantile(1.0 - u / 2.0, DegreesOfFreedom(n - p));
  return n * std::log1p(t * t / nu);
}

double selection_test_level(double d, int n, int p) {
  if (!(d >= 0.0)) throw std::invalid_argument("selection_test_level: d must be >= 0");
  if (p < 1 || p >= n) throw std::invalid_argument("selection_test_level requires 1 <= p < n");
  const double nu = n - p;
  const double threshold = std::sqrt(nu * std::expm1(d / n));
  return 2.0 * (1.0 - student_t_cdf(threshold, DegreesOfFreedom(n - p)));
}

std::vector<CurvePoint> coverage_curve(const ScenarioParams& params, const std::vector<double>& gamma_grid,
                                       const QuadratureConfig& q, double c_min) {
  std::vector<CurvePoint> curve;
  curve.reserve(gamma_grid.size());
  if (gamma_grid.empty()) return curve;
  const double denominator = scaled_length_denominator(params, c_min);
  for (double g : gamma_grid) {
    const PointEvaluation e = evaluate_point(g, params, q);
    curve.push_back({g, e.coverage, e.length_factor / denominator});
  }
  return curve;
}

std::vector<CurvePoint> coverage_curve(const ScenarioParams& params, const std::vector<double>& gamma_grid,
                                       const QuadratureConfig& q) {
  if (gamma_grid.empty()) return {};
  return coverage_curve(params, gamma_grid, q, min_coverage(params, q).c_min);
}

}  // namespace mapl
