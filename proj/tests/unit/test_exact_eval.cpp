#include <catch_amalgamated.hpp>

#include <cmath>

#include "mapl/exact_eval.hpp"
#include "mapl/special_functions.hpp"
#include "oracles.hpp"

using namespace mapl;

namespace {

const ScenarioParams kCloud{33, 22, 0.2472, 0.05, 2.0};

}  // namespace

TEST_CASE("config validation") {
  QuadratureConfig q;
  CHECK_NOTHROW(q.validate());
  q.x_nodes = 15;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = {};
  q.x_halfwidth = 5.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = {};
  q.y_lower_tail = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  CHECK(QuadratureConfig{}.doubled().x_nodes == 400);
  CHECK(QuadratureConfig{}.halved().y_nodes == 60);
  CHECK_THROWS_AS(coverage_probability(0.0, ScenarioParams{33, 22, 1.2, 0.05, 2}), std::invalid_argument);
}

TEST_CASE("coverage at default config is converged") {
  const PointEvaluation e = evaluate_point(0.0, kCloud);
  CHECK(e.coverage_error < 5e-5);
  const PointEvaluation fine = evaluate_point(0.0, kCloud, QuadratureConfig{}.doubled());
  CHECK(std::fabs(e.coverage - fine.coverage) < 5e-6);
  CHECK(std::fabs(e.length_factor - fine.length_factor) < 5e-6);
  CHECK(e.coverage > 0.0);
  CHECK(e.coverage < 1.0);
  CHECK(e.length_factor > 0.0);
}

TEST_CASE("quadrature error is reported when the tolerance cannot be met") {
  QuadratureConfig q;
  q.x_nodes = 16;
  q.y_nodes = 16;
  q.error_tolerance = 1e-14;
  try {
    evaluate_point(1.0, kCloud, q);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.error_estimate() > 1e-14);
  }
}

TEST_CASE("large gamma approaches the profile M2 values") {
  const double bound = corollary1_bound(kCloud);
  const PointEvaluation e = evaluate_point(30.0, kCloud);
  CHECK(std::fabs(e.coverage - bound) < 1e-3);
  const DegreesOfFreedom nu(11);
  const double len = 2.0 * std::sqrt(11.0 * std::expm1(std::pow(oracle::normal_quantile(0.975), 2) / 33.0)) *
                     scaled_chi_mean(nu);
  CHECK(std::fabs(e.length_factor - len) < 1e-6);
}

TEST_CASE("evenness in gamma and rho") {
  for (double g : {0.7, 2.0}) {
    for (double r : {-0.6, 0.2472}) {
      ScenarioParams s = kCloud;
      s.rho = r;
      const PointEvaluation a = evaluate_point(g, s);
      const PointEvaluation b = evaluate_point(-g, s);
      s.rho = -r;
      const PointEvaluation c = evaluate_point(g, s);
      CHECK(std::fabs(a.coverage - b.coverage) < 1e-8);
      CHECK(std::fabs(a.coverage - c.coverage) < 1e-8);
      CHECK(std::fabs(a.length_factor - b.length_factor) < 1e-8);
      CHECK(std::fabs(a.length_factor - c.length_factor) < 1e-8);
    }
  }
}

TEST_CASE("averaging persists at gamma = 0, rho = 0") {
  ScenarioParams s = kCloud;
  s.rho = 0.0;
  CHECK(std::fabs(coverage_probability(0.0, s) - 0.95) > 1e-3);
}

TEST_CASE("scaled length denominator") {
  const double ref = 2.0 * oracle::t_quantile(0.86575, 11) * 0.9775593518547726;
  CHECK(std::fabs(scaled_length_denominator(kCloud, 0.7315) - ref) < 1e-10);
  CHECK_THROWS_AS(scaled_length_denominator(kCloud, 1.0), std::invalid_argument);
}

TEST_CASE("min coverage") {
  const MinCoverage m = min_coverage(kCloud);
  CHECK(m.gamma_max == 15.0);
  CHECK(m.c_min <= corollary1_bound(kCloud) + 5e-5);
  CHECK(std::fabs(m.c_min - 0.7315) < 0.002);
  QuadratureConfig fast;
  fast.estimate_error = false;
  for (double g = 0.0; g <= 15.0; g += 1.25) CHECK(m.c_min <= coverage_probability(g, kCloud, fast) + 1e-12);

  ScenarioParams strong = kCloud;
  strong.rho = 0.9;
  CHECK(min_coverage(strong).c_min < m.c_min);
  CHECK_THROWS_AS(min_coverage(kCloud, {}, 5.0), std::invalid_argument);
}

TEST_CASE("corollary 1 bound") {
  const double b = corollary1_bound(33, 22, 0.05);
  const double arg = std::sqrt(11.0 * std::expm1(std::pow(oracle::normal_quantile(0.975), 2) / 33.0));
  CHECK(std::fabs(b - (2.0 * oracle::t_cdf(arg, 11) - 1.0)) < 1e-12);
  CHECK(std::fabs(b - 0.7315) < 2e-3);
  CHECK(std::fabs(corollary1_bound(1000000, 1, 0.05) - 0.95) < 1e-4);
  double prev = 1.0;
  for (int p = 1; p < 33; ++p) {
    const double v = corollary1_bound(33, p, 0.05);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("asymptotic limit") {
  CHECK(std::fabs(asymptotic_coverage_limit(2.0 / 3.0, 0.05) -
                  (2.0 * oracle::normal_cdf(oracle::normal_quantile(0.975) / std::sqrt(3.0)) - 1.0)) < 1e-14);
  CHECK(std::fabs(asymptotic_coverage_limit(1e-12, 0.05) - 0.95) < 1e-10);
  const double limit = asymptotic_coverage_limit(0.5, 0.05);
  double prev_gap = 1.0;
  for (int n : {1000, 10000, 100000}) {
    const double gap = std::fabs(corollary1_bound(n, n / 2, 0.05) - limit);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-4);
}

TEST_CASE("penalty calibration") {
  CHECK(std::fabs(calibrate_d(0.157, 1000000, 1) - 2.0) < 0.01);
  CHECK(std::fabs(calibrate_d(0.05, 1000000, 1) - 3.84) < 0.01);
  const int n = 1000000;
  const double u = 2.0 * (1.0 - oracle::normal_cdf(std::sqrt(std::log(double(n)))));
  CHECK(std::fabs(calibrate_d(u, n, 1) - std::log(double(n))) < 1e-3);
  for (double d : {0.45, 2.0, 3.84, 7.0}) {
    CHECK(std::fabs(calibrate_d(selection_test_level(d, 33, 22), 33, 22) - d) < 1e-9);
  }
}

TEST_CASE("coverage curve") {
  CHECK(coverage_curve(kCloud, {}).empty());
  const std::vector<double> grid{-1.5, 0.0, 1.5};
  const auto curve = coverage_curve(kCloud, grid, {}, 0.73);
  REQUIRE(curve.size() == 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curve[i].gamma == grid[i]);
    CHECK(curve[i].coverage > 0.0);
    CHECK(curve[i].coverage < 1.0);
    CHECK(curve[i].scaled_length > 0.0);
  }
  CHECK(std::fabs(curve[0].coverage - curve[2].coverage) < 1e-8);
  CHECK(std::fabs(curve[0].scaled_length - curve[2].scaled_length) < 1e-8);
  CHECK(curve[1].scaled_length ==
        Catch::Approx(expected_length_factor(0.0, kCloud) / scaled_length_denominator(kCloud, 0.73)).epsilon(1e-14));
}
