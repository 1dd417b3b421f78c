#pragma once

// Probability primitives shared by every other module: standard normal,
// Student t (integer degrees of freedom), the density of (Q/nu)^{1/2} for
// Q ~ chi-square(nu), and a few gamma-function helpers.
//
// All functions are pure and safe to call concurrently.

#include <stdexcept>

namespace mapl {

/// Residual degrees of freedom nu = n - p.
class DegreesOfFreedom {
 public:
  explicit DegreesOfFreedom(int nu) : nu_(nu) {
    if (nu < 1) {
      throw std::invalid_argument("degrees of freedom must be >= 1");
    }
  }
  int value() const noexcept { return nu_; }
  double as_double() const noexcept { return static_cast<double>(nu_); }

 private:
  int nu_;
};

// ----------------------------------------------------------------------------
// Gamma function helpers
// ----------------------------------------------------------------------------

/// log Gamma(x) for x > 0. Reentrant (does not touch signgam).
double log_gamma(double x);

/// log{Gamma(x + d) / Gamma(x)} for x > 0, x + d > 0, computed without the
/// cancellation that a difference of two large lgamma values suffers.
double log_gamma_ratio(double x, double d);

/// log B(a, b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b). Both x and 1 - x are passed so that
/// callers holding an accurate complement do not lose it.
double incomplete_beta(double a, double b, double x, double one_minus_x);
double incomplete_beta(double a, double b, double x);

/// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// ----------------------------------------------------------------------------
// Standard normal
// ----------------------------------------------------------------------------

double std_normal_pdf(double x);

/// Phi(x). Saturates to 0 / 1 in the extreme tails.
double std_normal_cdf(double x);

/// Phi^{-1}(u). Throws std::domain_error unless 0 < u < 1.
double std_normal_quantile(double u);

// ----------------------------------------------------------------------------
// Student t
// ----------------------------------------------------------------------------

double student_t_pdf(double x, DegreesOfFreedom nu);

/// G_nu(x), computed through the regularized incomplete beta function.
double student_t_cdf(double x, DegreesOfFreedom nu);

/// G_nu^{-1}(u) by a bracketed Newton / bisection hybrid.
/// Throws std::domain_error unless 0 < u < 1.
double student_t_quantile(double u, DegreesOfFreedom nu);

// ----------------------------------------------------------------------------
// Scaled chi: density of Y = (Q / nu)^{1/2}, Q ~ chi-square(nu)
// ----------------------------------------------------------------------------

/// f_nu(y) = 2 (nu/2)^{nu/2} y^{nu-1} exp(-nu y^2 / 2) / Gamma(nu/2), y > 0.
/// Returns 0 for y <= 0.
double scaled_chi_density(double y, DegreesOfFreedom nu);

/// P(Y <= y).
double scaled_chi_cdf(double y, DegreesOfFreedom nu);

/// Inverse of scaled_chi_cdf. Throws std::domain_error unless 0 < u < 1.
double scaled_chi_quantile(double u, DegreesOfFreedom nu);

/// E[Y] = 2^{1/2} Gamma((nu+1)/2) / {nu^{1/2} Gamma(nu/2)}.
double scaled_chi_mean(DegreesOfFreedom nu);

}  // namespace mapl
