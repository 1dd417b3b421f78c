#include "mapl/regression.hpp"

#include <cmath>
#include <sstream>

namespace mapl {

namespace {

using Kind = FitError::Kind;
using PivotedQR = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>;

void check_dimensions(const Eigen::MatrixXd& X, const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (a.size() != p || c.size() != p) {
    std::ostringstream msg;
    msg << "dimension mismatch: X has " << p << " columns, a has " << a.size() << " and c has " << c.size()
        << " entries";
    throw FitError(Kind::DimensionMismatch, msg.str());
  }
  if (p < 2 || p >= n) throw FitError(Kind::DimensionMismatch, "need 2 <= p < n");
  if (a.isZero(0.0) || c.isZero(0.0)) throw FitError(Kind::DegenerateFunctionals, "a and c must be nonzero");
}

void check_rank(const PivotedQR& qr) {
  const Eigen::MatrixXd& m = qr.matrixQR();
  const Eigen::Index p = m.cols();
  const double r_max = std::fabs(m(0, 0));
  const double r_min = std::fabs(m(p - 1, p - 1));
  if (!(r_max > 0.0) || r_min < kRankTolerance * r_max) {
    throw FitError(Kind::RankDeficient, "model matrix is rank deficient");
  }
}

// X P = Q R gives (X'X)^{-1} = P R^{-1} R^{-T} P', so u'(X'X)^{-1} w is the
// inner product of R^{-T} P'u and R^{-T} P'w.
DesignMoments moments_from(const PivotedQR& qr, const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
  const Eigen::Index p = qr.matrixQR().cols();
  const auto R = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const auto& perm = qr.colsPermutation();
  const Eigen::VectorXd za = R.transpose().solve(perm.transpose() * a);
  const Eigen::VectorXd zc = R.transpose().solve(perm.transpose() * c);
  DesignMoments m;
  m.v_theta = za.squaredNorm();
  m.v_tau = zc.squaredNorm();
  m.rho = za.dot(zc) / std::sqrt(m.v_theta * m.v_tau);
  if (!(std::fabs(m.rho) <= 1.0 - kCollinearTolerance)) {
    throw FitError(Kind::DegenerateFunctionals, "a and c are linearly dependent (|rho| = 1)");
  }
  return m;
}

}  // namespace

const char* to_string(FitError::Kind kind) {
  switch (kind) {
    case Kind::DimensionMismatch: return "dimension_mismatch";
    case Kind::RankDeficient: return "rank_deficient";
    case Kind::DegenerateFunctionals: return "degenerate_functionals";
    case Kind::ZeroResidualVariance: return "zero_residual_variance";
  }
  return "unknown";
}

DesignMoments design_moments(const Eigen::MatrixXd& X, const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
  check_dimensions(X, a, c);
  const PivotedQR qr(X);
  check_rank(qr);
  return moments_from(qr, a, c);
}

ModelFit fit(const RegressionProblem& problem) {
  check_dimensions(problem.X, problem.a, problem.c);
  if (problem.y_obs.size() != problem.X.rows()) {
    std::ostringstream msg;
    msg << "dimension mismatch: X has " << problem.X.rows() << " rows but y has " << problem.y_obs.size()
        << " entries";
    throw FitError(Kind::DimensionMismatch, msg.str());
  }
  const PivotedQR qr(problem.X);
  check_rank(qr);
  const DesignMoments m = moments_from(qr, problem.a, problem.c);

  const Eigen::VectorXd beta = qr.solve(problem.y_obs);
  const Eigen::VectorXd residual = problem.y_obs - problem.X * beta;
  const double rss = residual.squaredNorm();

  ModelFit out;
  out.n = static_cast<int>(problem.X.rows());
  out.p = static_cast<int>(problem.X.cols());
  out.theta_hat = problem.a.dot(beta);
  out.tau_hat = problem.c.dot(beta) - problem.t;
  out.v_theta = m.v_theta;
  out.v_tau = m.v_tau;
  out.rho = m.rho;
  out.sigma_hat = std::sqrt(rss / out.residual_df());

  if (!(out.sigma_hat > 0.0) || std::sqrt(rss) <= 1e-14 * problem.y_obs.norm()) {
    throw FitError(Kind::ZeroResidualVariance, "residual variance is zero (exact fit)");
  }
  return out;
}

GammaParam gamma_of(const ModelFit& fit, double sigma_true, double tau_true) {
  if (!(sigma_true > 0.0)) throw std::invalid_argument("gamma_of: sigma must be positive");
  return {tau_true / (sigma_true * std::sqrt(fit.v_tau))};
}

}  // namespace mapl
