#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapl/exact_eval.hpp"
#include "mapl_cli/cli.hpp"
#include "mapl_cli/report.hpp"
#include "oracles.hpp"

using mapl::report::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = mapl::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mapl_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

// y = 1 + 0.5 x1 + 0.2 x2 + noise; columns y, intercept, x1, x2.
struct Dataset {
  std::vector<std::vector<double>> rows;
  fs::path path;
};

Dataset synthetic(int n, std::uint64_t seed) {
  oracle::Gen g(seed);
  Dataset d;
  d.path = scratch("data_" + std::to_string(seed) + ".csv");
  std::ofstream f(d.path);
  f << "y,one,x1,x2\n";
  f.precision(17);
  for (int i = 0; i < n; ++i) {
    const double x1 = g.normal();
    const double x2 = g.normal() + 0.4 * x1;
    const double y = 1.0 + 0.5 * x1 + 0.2 * x2 + 0.7 * g.normal();
    d.rows.push_back({y, 1.0, x1, x2});
    f << y << ",1," << x1 << "," << x2 << "\n";
  }
  return d;
}

}  // namespace

TEST_CASE("interval report agrees with normal-equation oracle", "[cli]") {
  const Dataset d = synthetic(25, 11);
  const fs::path out = scratch("report.json");
  const Result r = call({"interval", "--data", d.path.string(), "--header", "--a", "0,1,0", "--c", "0,0,1", "--out",
                         out.string()});
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(mapl::cli::manifest_path(out.string())));
  const json rep = json::parse(slurp(out));

  oracle::Matrix xtx(3, std::vector<double>(3, 0.0));
  std::vector<double> xty(3, 0.0);
  for (const auto& row : d.rows)
    for (int i = 0; i < 3; ++i) {
      xty[i] += row[1 + i] * row[0];
      for (int j = 0; j < 3; ++j) xtx[i][j] += row[1 + i] * row[1 + j];
    }
  const oracle::Matrix inv = oracle::invert(xtx);
  std::vector<double> beta(3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) beta[i] += inv[i][j] * xty[j];
  double rss = 0.0;
  for (const auto& row : d.rows) {
    const double e = row[0] - beta[0] - beta[1] * row[2] - beta[2] * row[3];
    rss += e * e;
  }
  const double sigma = std::sqrt(rss / 22.0);
  const double theta = beta[1];

  CHECK(rep["fit"]["theta_hat"].get<double>() == Catch::Approx(theta).epsilon(1e-10));
  CHECK(rep["fit"]["tau_hat"].get<double>() == Catch::Approx(beta[2]).epsilon(1e-10));
  CHECK(rep["fit"]["sigma_hat"].get<double>() == Catch::Approx(sigma).epsilon(1e-10));
  CHECK(rep["fit"]["rho"].get<double>() == Catch::Approx(inv[1][2] / std::sqrt(inv[1][1] * inv[2][2])).epsilon(1e-10));

  REQUIRE(rep["intervals"].size() == 5);
  const double half = oracle::t_quantile(0.975, 22) * sigma * std::sqrt(inv[1][1]);
  for (const auto& j : rep["intervals"]) {
    const mapl::IntervalResult iv = mapl::report::interval_from_json(j);
    CHECK(mapl::report::to_json(iv) == j);
    CHECK(iv.lower < iv.upper);
    CHECK(iv.contains(theta));
    if (iv.method == mapl::IntervalMethod::StudentT_M2) {
      CHECK(iv.lower == Catch::Approx(theta - half).epsilon(1e-10));
      CHECK(iv.upper == Catch::Approx(theta + half).epsilon(1e-10));
    }
    if (iv.method == mapl::IntervalMethod::MPI) CHECK(iv.solver_residual < 1e-10);
    if (iv.method == mapl::IntervalMethod::NaiveAIC) CHECK(iv.selected_model.has_value());
  }
}

TEST_CASE("json format prints the report to stdout", "[cli]") {
  const Dataset d = synthetic(30, 5);
  const Result r = call({"interval", "--data", d.path.string(), "--header", "--a", "0,1,0", "--c", "0,0,1",
                         "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["intervals"].size() == 5);
}

TEST_CASE("linearly dependent functionals exit 1 with a diagnostic", "[cli]") {
  const Dataset d = synthetic(20, 2);
  const Result r = call({"interval", "--data", d.path.string(), "--header", "--a", "0,0,1", "--c", "0,0,2"});
  CHECK(r.code == mapl::cli::kExitUsage);
  const json diag = json::parse(r.err);
  CHECK(diag["error"] == "input");
  CHECK(diag["message"].get<std::string>().find("linearly dependent") != std::string::npos);
}

TEST_CASE("csv errors carry the line number", "[cli]") {
  const fs::path bad = scratch("bad.csv");
  std::ofstream(bad) << "y,one,x\n1,1,0.5\n2,1,0.1\n3,1,oops\n4,1,0.2\n";
  const Result r = call({"interval", "--data", bad.string(), "--header", "--a", "0,1", "--c", "1,0"});
  CHECK(r.code == mapl::cli::kExitUsage);
  CHECK(json::parse(r.err)["kind"] == "csv");
  CHECK(r.err.find("line 4") != std::string::npos);
}

TEST_CASE("flag errors and help", "[cli]") {
  CHECK(call({}).code == mapl::cli::kExitUsage);
  CHECK(call({"bound", "--n", "33"}).code == mapl::cli::kExitUsage);
  CHECK(call({"bound", "--n", "33", "--p", "22", "--nonsense", "1"}).code == mapl::cli::kExitUsage);
  const Result help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("coverage-curve") != std::string::npos);
  CHECK(call({"min-coverage", "--n", "10", "--p", "12", "--rho", "0.5"}).code == mapl::cli::kExitUsage);
}

TEST_CASE("quadrature failure exits 2", "[cli]") {
  const Result r = call({"coverage-curve", "--n", "33", "--p", "22", "--rho", "0.8", "--steps", "1", "--c-min",
                         "0.73", "--x-nodes", "32", "--y-nodes", "32", "--error-tolerance", "1e-15"});
  CHECK(r.code == mapl::cli::kExitNumerical);
  CHECK(json::parse(r.err)["error"] == "numerical");
}

TEST_CASE("single-step curve and replay", "[cli]") {
  const fs::path out = scratch("curve.csv");
  const std::vector<std::string> args{"coverage-curve", "--n",       "33",   "--p",       "22",  "--rho",
                                      "0.8",            "--gamma-min", "1.5", "--steps",   "1",   "--c-min",
                                      "0.73",           "--x-nodes", "80",   "--y-nodes", "60",  "--out",
                                      out.string()};
  REQUIRE(call(args).code == 0);
  const std::string first = slurp(out);

  std::istringstream lines(first);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "gamma,coverage,scaled_length");
  CHECK_FALSE(std::getline(lines, extra));

  mapl::QuadratureConfig q;
  q.x_nodes = 80;
  q.y_nodes = 60;
  const mapl::ScenarioParams params{33, 22, 0.8, 0.05, 2.0};
  const mapl::PointEvaluation e = mapl::evaluate_point(1.5, params, q);
  double g = 0, cov = 0, len = 0;
  REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf", &g, &cov, &len) == 3);
  CHECK(g == 1.5);
  CHECK(cov == e.coverage);
  CHECK(len == Catch::Approx(e.length_factor / mapl::scaled_length_denominator(params, 0.73)).epsilon(1e-14));

  const json manifest = json::parse(slurp(mapl::cli::manifest_path(out.string())));
  for (const char* key : {"tool", "version", "command", "argv", "params", "quadrature", "outputs", "timestamp"})
    CHECK(manifest.contains(key));

  fs::remove(out);
  REQUIRE(call({"replay", "--manifest", mapl::cli::manifest_path(out.string())}).code == 0);
  CHECK(slurp(out) == first);
}

TEST_CASE("length curve columns", "[cli]") {
  const Result r = call({"length-curve", "--n", "33", "--p", "22", "--rho", "0.5", "--steps", "2", "--gamma-max",
                         "1", "--c-min", "0.73", "--x-nodes", "80", "--y-nodes", "60"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("gamma,expected_length_factor,scaled_length\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

TEST_CASE("bound and calibrate-d", "[cli]") {
  const Result b = call({"bound", "--n", "33", "--p", "22", "--alpha", "0.05"});
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["corollary1_bound"].get<double>() == Catch::Approx(0.7314665680).margin(1e-9));

  // Level of the likelihood ratio test implied by AIC, from Boost's t cdf.
  const int n = 33, p = 22, nu = n - p;
  const double level = 2.0 * (1.0 - oracle::t_cdf(std::sqrt(nu * std::expm1(2.0 / n)), nu));
  std::ostringstream u;
  u.precision(17);
  u << level;
  const Result c = call({"calibrate-d", "--u", u.str(), "--n", "33", "--p", "22"});
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out)["d"].get<double>() == Catch::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("seeded simulation is deterministic", "[cli]") {
  const std::vector<std::string> args{"simulate", "--n",          "33",   "--p",    "22", "--rho", "0.8",
                                      "--gamma",  "1",            "--replicates", "5000", "--seed", "42"};
  const Result a = call(args);
  const Result b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto other = args;
  other.back() = "43";
  CHECK(call(other).out != a.out);

  const Result naive = call({"simulate-naive", "--n", "33", "--p", "22", "--rho", "0.8", "--gamma", "1",
                             "--replicates", "5000", "--seed", "42"});
  REQUIRE(naive.code == 0);
  const json j = json::parse(naive.out);
  CHECK(j["method"] == "naive_aic");
  CHECK(j.contains("selection_rate_m2"));
}
