#pragma once

// Confidence intervals for theta built from a ModelFit:
//   StudentT_M2  theta_hat +/- G^{-1}_{n-p}(1 - alpha/2) sigma_hat v_theta^{1/2}
//   Profile_M2   closed-form profile likelihood interval under M2
//   Profile_M1   profile likelihood interval under M1 (tau = 0)
//   MPI          model-averaged profile likelihood interval
//   NaiveAIC     t interval in the model with smaller information criterion

#include <optional>
#include <string>
#include <vector>

#include "mapl/regression.hpp"

namespace mapl {

enum class IntervalMethod { StudentT_M2, Profile_M2, Profile_M1, MPI, NaiveAIC };
enum class SelectedModel { M1, M2 };

const char* to_string(IntervalMethod method);
const char* to_string(SelectedModel model);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
IntervalMethod parse_interval_method(const std::string& name);
SelectedModel parse_selected_model(const std::string& name);

struct IntervalResult {
  IntervalMethod method = IntervalMethod::StudentT_M2;
  double lower = 0.0;
  double upper = 0.0;
  double nominal_coverage = 0.0;
  /// max |defining equation - target| at the endpoints; 0 for closed forms.
  double solver_residual = 0.0;
  std::optional<SelectedModel> selected_model;  // NaiveAIC only

  double length() const noexcept { return upper - lower; }
  bool contains(double value) const noexcept { return lower <= value && value <= upper; }
};

IntervalResult student_t_interval(const ModelFit& fit, double alpha);
IntervalResult profile_interval_m2(const ModelFit& fit, double alpha);
IntervalResult profile_interval_m1(const ModelFit& fit, double alpha);
IntervalResult mpi_interval(const ModelFit& fit, double alpha, double d);
IntervalResult naive_aic_interval(const ModelFit& fit, double alpha, double d);

/// Half-width of the M2 profile likelihood interval in units of
/// sigma_hat v_theta^{1/2}: (n-p)^{1/2} {exp(z^2_{1-alpha/2}/n) - 1}^{1/2}.
double profile_m2_half_width_factor(int n, int p, double alpha);

/// The t interval that treats M1 as given: centre theta_hat - rho (v_theta/v_tau)^{1/2} tau_hat,
/// n - p + 1 degrees of freedom, variance v_theta (1 - rho^2) times the M1
/// residual mean square {tau_hat^2/v_tau + (n-p) sigma_hat^2} / (n-p+1).
IntervalResult student_t_interval_m1(const ModelFit& fit, double alpha);

/// All five intervals in IntervalMethod order.
std::vector<IntervalResult> all_intervals(const ModelFit& fit, double alpha, double d);

}  // namespace mapl
