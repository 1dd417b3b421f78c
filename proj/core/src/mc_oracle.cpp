#include "mapl/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mapl/intervals.hpp"
#include "mapl/parallel.hpp"

namespace mapl {

namespace {

constexpr const char* kGenerator = "mt19937_64 (per-block seeds via splitmix64)";
constexpr const char* kNormalMethod = "std::normal_distribution (libstdc++ Marsaglia polar)";
constexpr const char* kChiSquareMethod = "std::gamma_distribution(nu/2, 2) (libstdc++ Marsaglia-Tsang)";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct BlockTally {
  std::int64_t covered = 0;
  std::int64_t selected_m2 = 0;
  double length_sum = 0.0;
};

// Runs `replicate(rng, tally)` for every replicate, block by block, and
// merges the block tallies in block order.
template <typename Replicate>
SimResult run_blocks(std::int64_t replicates, std::uint64_t seed, Replicate replicate) {
  const std::int64_t blocks = (replicates + kReplicatesPerStream - 1) / kReplicatesPerStream;
  std::vector<BlockTally> tallies(static_cast<std::size_t>(blocks));
  parallel_for(tallies.size(), [&](std::size_t b) {
    std::mt19937_64 rng(stream_seed(seed, b));
    const std::int64_t begin = static_cast<std::int64_t>(b) * kReplicatesPerStream;
    const std::int64_t end = std::min(replicates, begin + kReplicatesPerStream);
    BlockTally tally;
    replicate(rng, end - begin, tally);
    tallies[b] = tally;
  });

  BlockTally total;
  for (const auto& t : tallies) {
    total.covered += t.covered;
    total.selected_m2 += t.selected_m2;
    total.length_sum += t.length_sum;
  }
  SimResult out;
  out.replicates_used = replicates;
  const double reps = static_cast<double>(replicates);
  out.coverage_estimate = total.covered / reps;
  out.std_error = std::sqrt(out.coverage_estimate * (1.0 - out.coverage_estimate) / reps);
  out.mean_length_factor = total.length_sum / reps;
  out.generator = kGenerator;
  out.normal_method = kNormalMethod;
  out.chi_square_method = kChiSquareMethod;
  out.selection_rate_m2 = total.selected_m2 / reps;
  return out;
}

struct StandardizedDraw {
  double g, h, w;
};

class StandardizedSampler {
 public:
  StandardizedSampler(const ScenarioParams& params, double gamma)
      : gamma_(gamma),
        rho_(params.rho),
        cond_sd_(std::sqrt(1.0 - params.rho * params.rho)),
        nu_(params.residual_df()),
        chi_square_(0.5 * params.residual_df(), 2.0) {}

  StandardizedDraw operator()(std::mt19937_64& rng) {
    const double h = gamma_ + normal_(rng);
    const double g = rho_ * (h - gamma_) + cond_sd_ * normal_(rng);
    const double w = std::sqrt(chi_square_(rng) / nu_);
    return {g, h, w};
  }

 private:
  double gamma_, rho_, cond_sd_, nu_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::gamma_distribution<double> chi_square_;
};

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

void SimConfig::validate() const {
  if (replicates < 1000) throw std::invalid_argument("simulation needs at least 1000 replicates");
  params.validate();
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
}

SimResult simulate_mpi(const SimConfig& config) {
  config.validate();
  const ScenarioParams& params = config.params;
  const double upper = 1.0 - params.alpha / 2.0;
  const double lower = params.alpha / 2.0;
  SimResult out = run_blocks(config.replicates, config.seed,
                             [&](std::mt19937_64& rng, std::int64_t count, BlockTally& tally) {
    StandardizedSampler sample(params, config.gamma);
    for (std::int64_t i = 0; i < count; ++i) {
      const auto [g, h, w] = sample(rng);
      // theta_l <= theta <= theta_u  <=>  delta_{alpha/2} <= G <= delta_{1-alpha/2}
      const double d_hi = solve_delta(upper, h, w, params);
      const double d_lo = solve_delta(lower, h, w, params);
      if (d_lo <= g && g <= d_hi) ++tally.covered;
      tally.length_sum += d_hi - d_lo;
    }
  });
  out.selection_rate_m2.reset();
  return out;
}

SimResult simulate_naive_aic(const SimConfig& config) {
  config.validate();
  const ScenarioParams& params = config.params;
  return run_blocks(config.replicates, config.seed,
                    [&](std::mt19937_64& rng, std::int64_t count, BlockTally& tally) {
    StandardizedSampler sample(params, config.gamma);
    ModelFit fit;
    fit.n = params.n;
    fit.p = params.p;
    fit.rho = params.rho;
    fit.v_theta = 1.0;
    fit.v_tau = 1.0;
    for (std::int64_t i = 0; i < count; ++i) {
      const auto [g, h, w] = sample(rng);
      // sigma = v_theta = v_tau = 1 and theta = 0, so theta_hat = G.
      fit.theta_hat = g;
      fit.tau_hat = h;
      fit.sigma_hat = w;
      const IntervalResult ci = naive_aic_interval(fit, params.alpha, params.d);
      if (ci.contains(0.0)) ++tally.covered;
      if (ci.selected_model == SelectedModel::M2) ++tally.selected_m2;
      tally.length_sum += ci.length();
    }
  });
}

DesignSimResult simulate_from_design(const RegressionProblem& problem, const Eigen::VectorXd& beta_true,
                                     double sigma_true, const SimConfig& config) {
  if (!(sigma_true > 0.0)) throw std::invalid_argument("sigma_true must be positive");
  if (beta_true.size() != problem.X.cols()) throw std::invalid_argument("beta_true has the wrong length");
  if (config.params.n != problem.X.rows() || config.params.p != problem.X.cols()) {
    throw std::invalid_argument("config n, p do not match the design");
  }
  if (config.replicates < 1000) throw std::invalid_argument("simulation needs at least 1000 replicates");

  const Eigen::VectorXd mean = problem.X * beta_true;
  const double theta_true = problem.a.dot(beta_true);
  const double tau_true = problem.c.dot(beta_true) - problem.t;

  const DesignMoments design = design_moments(problem.X, problem.a, problem.c);

  DesignSimResult out;
  out.rho = design.rho;
  out.gamma = tau_true / (sigma_true * std::sqrt(design.v_tau));
  ScenarioParams params = config.params;
  params.rho = design.rho;
  params.validate();

  const double scale = sigma_true * std::sqrt(design.v_theta);
  out.sim = run_blocks(config.replicates, config.seed,
                       [&](std::mt19937_64& rng, std::int64_t count, BlockTally& tally) {
    std::normal_distribution<double> normal(0.0, 1.0);
    RegressionProblem replicate = problem;
    for (std::int64_t i = 0; i < count; ++i) {
      for (Eigen::Index k = 0; k < mean.size(); ++k) {
        replicate.y_obs(k) = mean(k) + sigma_true * normal(rng);
      }
      const ModelFit f = fit(replicate);
      const IntervalResult ci = mpi_interval(f, params.alpha, params.d);
      if (ci.contains(theta_true)) ++tally.covered;
      tally.length_sum += ci.length() / scale;
    }
  });
  out.sim.selection_rate_m2.reset();
  return out;
}

}  // namespace mapl
