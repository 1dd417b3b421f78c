#pragma once

// Least-squares sufficient statistics for the parameter of interest
// theta = a'beta and the constraint parameter tau = c'beta - t.

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "mapl/likelihood.hpp"

namespace mapl {

struct RegressionProblem {
  Eigen::MatrixXd X;      // n x p model matrix, full column rank
  Eigen::VectorXd y_obs;  // n responses
  Eigen::VectorXd a;      // theta = a' beta
  Eigen::VectorXd c;      // tau = c' beta - t
  double t = 0.0;
};

struct ModelFit {
  double theta_hat = 0.0;
  double tau_hat = 0.0;
  double sigma_hat = 0.0;
  double v_theta = 0.0;  // a'(X'X)^{-1} a
  double v_tau = 0.0;    // c'(X'X)^{-1} c
  double rho = 0.0;      // a'(X'X)^{-1} c / (v_theta v_tau)^{1/2}
  int n = 0;
  int p = 0;

  int residual_df() const noexcept { return n - p; }

  /// Scenario with this fit's (n, p, rho).
  ScenarioParams scenario(double alpha, double d) const { return {n, p, rho, alpha, d}; }
};

class FitError : public std::runtime_error {
 public:
  enum class Kind { DimensionMismatch, RankDeficient, DegenerateFunctionals, ZeroResidualVariance };

  FitError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(FitError::Kind kind);

/// Relative threshold on the diagonal of the triangular factor below which X
/// is treated as rank deficient.
inline constexpr double kRankTolerance = 1e-10;
/// |rho| above 1 - kCollinearTolerance means a and c are linearly dependent.
inline constexpr double kCollinearTolerance = 1e-10;

/// Design-only quantities v_theta, v_tau, rho (no response needed).
struct DesignMoments {
  double v_theta = 0.0;
  double v_tau = 0.0;
  double rho = 0.0;
};

/// Checks the rank of X and the independence of (a, c) as fit() does.
DesignMoments design_moments(const Eigen::MatrixXd& X, const Eigen::VectorXd& a, const Eigen::VectorXd& c);

/// Column-pivoted Householder QR fit. v_theta, v_tau and rho come from
/// solves with the triangular factor, never from an explicit (X'X)^{-1}.
ModelFit fit(const RegressionProblem& problem);

/// gamma = tau / (sigma v_tau^{1/2}) for known truth (simulation only).
GammaParam gamma_of(const ModelFit& fit, double sigma_true, double tau_true);

}  // namespace mapl
