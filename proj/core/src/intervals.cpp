#include "mapl/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mapl/likelihood.hpp"
#include "mapl/root_finding.hpp"
#include "mapl/special_functions.hpp"

namespace mapl {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace

const char* to_string(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::StudentT_M2: return "student_t_m2";
    case IntervalMethod::Profile_M2: return "profile_m2";
    case IntervalMethod::Profile_M1: return "profile_m1";
    case IntervalMethod::MPI: return "mpi";
    case IntervalMethod::NaiveAIC: return "naive_aic";
  }
  return "unknown";
}

const char* to_string(SelectedModel model) { return model == SelectedModel::M1 ? "M1" : "M2"; }

IntervalMethod parse_interval_method(const std::string& name) {
  for (auto m : {IntervalMethod::StudentT_M2, IntervalMethod::Profile_M2, IntervalMethod::Profile_M1,
                 IntervalMethod::MPI, IntervalMethod::NaiveAIC}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown interval method '" + name + "'");
}

SelectedModel parse_selected_model(const std::string& name) {
  if (name == "M1") return SelectedModel::M1;
  if (name == "M2") return SelectedModel::M2;
  throw std::invalid_argument("unknown model '" + name + "'");
}

double profile_m2_half_width_factor(int n, int p, double alpha) {
  const double z = std_normal_quantile(1.0 - alpha / 2.0);
  return std::sqrt(static_cast<double>(n - p) * std::expm1(z * z / n));
}

IntervalResult student_t_interval(const ModelFit& fit, double alpha) {
  require_alpha(alpha);
  const double q = student_t_quantile(1.0 - alpha / 2.0, DegreesOfFreedom(fit.residual_df()));
  const double half = q * fit.sigma_hat * std::sqrt(fit.v_theta);
  return {IntervalMethod::StudentT_M2, fit.theta_hat - half, fit.theta_hat + half, 1.0 - alpha, 0.0,
          std::nullopt};
}

IntervalResult profile_interval_m2(const ModelFit& fit, double alpha) {
  require_alpha(alpha);
  const double half =
      profile_m2_half_width_factor(fit.n, fit.p, alpha) * fit.sigma_hat * std::sqrt(fit.v_theta);
  return {IntervalMethod::Profile_M2, fit.theta_hat - half, fit.theta_hat + half, 1.0 - alpha, 0.0,
          std::nullopt};
}

IntervalResult profile_interval_m1(const ModelFit& fit, double alpha) {
  require_alpha(alpha);
  const ScenarioParams params = fit.scenario(alpha, 0.0);
  const double x = fit.tau_hat / std::sqrt(fit.v_tau);
  const double y = fit.sigma_hat;
  auto phi_r1 = [&](double delta) { return std_normal_cdf(r1(delta, x, y, params)); };

  // Bracket from the M1 estimate of theta, where r1 vanishes.
  RootOptions options;
  options.start = params.rho * x;
  options.initial_step = y;
  options.bracket_limit = 1e6 * std::max(1.0, y) + std::fabs(options.start);
  options.value_tol = kDeltaValueTolerance;
  const RootResult upper_delta = solve_increasing(phi_r1, 1.0 - alpha / 2.0, options);
  const RootResult lower_delta = solve_increasing(phi_r1, alpha / 2.0, options);

  const double s = std::sqrt(fit.v_theta);
  return {IntervalMethod::Profile_M1,
          fit.theta_hat - s * upper_delta.root,
          fit.theta_hat - s * lower_delta.root,
          1.0 - alpha,
          std::max(std::fabs(upper_delta.residual), std::fabs(lower_delta.residual)),
          std::nullopt};
}

IntervalResult mpi_interval(const ModelFit& fit, double alpha, double d) {
  require_alpha(alpha);
  if (!(d >= 0.0)) throw std::invalid_argument("penalty d must be >= 0");
  const ScenarioParams params = fit.scenario(alpha, d);
  const double x = fit.tau_hat / std::sqrt(fit.v_tau);
  const double y = fit.sigma_hat;

  const DeltaSolution hi = solve_delta_detailed(1.0 - alpha / 2.0, x, y, params);
  const DeltaSolution lo = solve_delta_detailed(alpha / 2.0, x, y, params);
  const double s = std::sqrt(fit.v_theta);
  return {IntervalMethod::MPI,
          fit.theta_hat - s * hi.delta,
          fit.theta_hat - s * lo.delta,
          1.0 - alpha,
          std::max(std::fabs(hi.residual), std::fabs(lo.residual)),
          std::nullopt};
}

IntervalResult student_t_interval_m1(const ModelFit& fit, double alpha) {
  require_alpha(alpha);
  const double nu1 = fit.residual_df() + 1.0;
  const double x2 = fit.tau_hat * fit.tau_hat / fit.v_tau;
  const double sigma1 =
      std::sqrt((x2 + fit.residual_df() * fit.sigma_hat * fit.sigma_hat) / nu1);
  const double centre = fit.theta_hat - fit.rho * std::sqrt(fit.v_theta / fit.v_tau) * fit.tau_hat;
  const double se = std::sqrt(fit.v_theta * (1.0 - fit.rho * fit.rho)) * sigma1;
  const double q = student_t_quantile(1.0 - alpha / 2.0, DegreesOfFreedom(fit.residual_df() + 1));
  return {IntervalMethod::NaiveAIC, centre - q * se, centre + q * se, 1.0 - alpha, 0.0,
          SelectedModel::M1};
}

IntervalResult naive_aic_interval(const ModelFit& fit, double alpha, double d) {
  require_alpha(alpha);
  if (!(d >= 0.0)) throw std::invalid_argument("penalty d must be >= 0");
  const ScenarioParams params = fit.scenario(alpha, d);
  const double x = fit.tau_hat / std::sqrt(fit.v_tau);
  // M2 only on a strict AIC_2 < AIC_1; ties keep the smaller model.
  if (information_criterion_difference(x, fit.sigma_hat, params) > 0.0) {
    IntervalResult r = student_t_interval(fit, alpha);
    r.method = IntervalMethod::NaiveAIC;
    r.selected_model = SelectedModel::M2;
    return r;
  }
  return student_t_interval_m1(fit, alpha);
}

std::vector<IntervalResult> all_intervals(const ModelFit& fit, double alpha, double d) {
  return {student_t_interval(fit, alpha), profile_interval_m2(fit, alpha),
          profile_interval_m1(fit, alpha), mpi_interval(fit, alpha, d),
          naive_aic_interval(fit, alpha, d)};
}

}  // namespace mapl
