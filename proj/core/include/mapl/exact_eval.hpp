#pragma once

// Exact coverage probability and expected length of the model-averaged
// profile likelihood interval as double integrals over
//   x ~ N(gamma, 1)  (standardized tau_hat)
//   y ~ f_{n-p}      (sigma_hat / sigma)
// evaluated by composite Gauss-Legendre quadrature, plus the closed-form
// quantities that bound or calibrate them.

#include <stdexcept>
#include <string>
#include <vector>

#include "mapl/likelihood.hpp"

namespace mapl {

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

struct QuadratureConfig {
  int x_nodes = 200;          // total Gauss-Legendre nodes for the x-integral
  int y_nodes = 120;          // total nodes for the y-integral
  int panel_order = 20;       // nodes per composite panel (capped by the node count)
  double x_halfwidth = 8.0;   // x-range is gamma +/- x_halfwidth
  double y_lower_tail = 1e-12;  // y-range is [F^{-1}(lower), F^{-1}(1 - upper)] of f_{n-p}
  double y_upper_tail = 1e-12;
  double solver_tol = kDeltaValueTolerance;  // |h - u| for every delta solve
  bool estimate_error = true;  // compare against the rule with half the nodes
  double error_tolerance = 5e-5;

  /// Throws std::invalid_argument on nodes < 16, x_halfwidth < 6, or tails
  /// outside (0, 0.5).
  void validate() const;
  QuadratureConfig doubled() const;
  QuadratureConfig halved() const;
};

struct PointEvaluation {
  double gamma = 0.0;
  double coverage = 0.0;
  double length_factor = 0.0;  // E(theta_u - theta_l) / (sigma v_theta^{1/2})
  double coverage_error = 0.0;  // |full - half-node rule|, 0 when not estimated
  double length_factor_error = 0.0;
};

/// Evaluates coverage and length factor together (they share the delta
/// solves). Throws QuadratureError if the coverage error estimate exceeds
/// config.error_tolerance.
PointEvaluation evaluate_point(double gamma, const ScenarioParams& params, const QuadratureConfig& q = {});

double coverage_probability(double gamma, const ScenarioParams& params, const QuadratureConfig& q = {});
double expected_length_factor(double gamma, const ScenarioParams& params, const QuadratureConfig& q = {});

/// 2 G^{-1}_{n-p}((c_min + 1)/2) E(sigma_hat/sigma): the length factor of the
/// t interval whose coverage equals c_min.
double scaled_length_denominator(const ScenarioParams& params, double c_min);

double scaled_expected_length(double gamma, const ScenarioParams& params, double c_min,
                              const QuadratureConfig& q = {});

struct MinCoverage {
  double c_min = 0.0;
  double gamma_at_min = 0.0;
  double gamma_max = 0.0;  // searched range is [0, gamma_max]
};

inline constexpr double kMinCoverageGammaMax = 15.0;
inline constexpr double kMinCoverageGridStep = 0.25;
inline constexpr double kMinCoverageGammaTol = 1e-3;

/// Minimum coverage over gamma in [0, gamma_max] (coverage is even in gamma):
/// grid search with step 0.25, then golden-section refinement around the
/// best grid point to |d gamma| < 1e-3.
MinCoverage min_coverage(const ScenarioParams& params, const QuadratureConfig& q = {},
                         double gamma_max = kMinCoverageGammaMax);

/// Coverage of the M2 profile likelihood interval, the limit of the MPI
/// coverage as |gamma| -> infinity and an upper bound on its minimum:
/// 2 G_{n-p}[(n-p)^{1/2} {exp(z^2_{1-alpha/2}/n) - 1}^{1/2}] - 1.
double corollary1_bound(const ScenarioParams& params);
double corollary1_bound(int n, int p, double alpha);

/// n -> infinity limit of corollary1_bound at p/n = r: 2 Phi{(1-r)^{1/2} z_{1-alpha/2}} - 1.
double asymptotic_coverage_limit(double r, double alpha);

/// Penalty d for which "reject M1 when AIC_2 < AIC_1" has level u:
/// d = n log[1 + {G^{-1}_{n-p}(1-u/2)}^2/(n-p)].
double calibrate_d(double u, int n, int p);

/// Level of that test for a given d: 2(1 - G_{n-p}[(n-p)^{1/2}{exp(d/n) - 1}^{1/2}]).
double selection_test_level(double d, int n, int p);

struct CurvePoint {
  double gamma = 0.0;
  double coverage = 0.0;
  double scaled_length = 0.0;
};

/// One point per grid value, in grid order. Scaled lengths use the supplied
/// c_min.
std::vector<CurvePoint> coverage_curve(const ScenarioParams& params, const std::vector<double>& gamma_grid,
                                       const QuadratureConfig& q, double c_min);
/// As above with c_min from min_coverage(params, q). An empty grid returns
/// an empty curve without searching.
std::vector<CurvePoint> coverage_curve(const ScenarioParams& params, const std::vector<double>& gamma_grid,
                                       const QuadratureConfig& q = {});

}  // namespace mapl
