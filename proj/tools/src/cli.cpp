#include "mapl_cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mapl/csv_reader.hpp"
#include "mapl/exact_eval.hpp"
#include "mapl/intervals.hpp"
#include "mapl/mc_oracle.hpp"
#include "mapl/parallel.hpp"
#include "mapl/regression.hpp"
#include "mapl/root_finding.hpp"
#include "mapl_cli/report.hpp"

#ifndef MAPL_VERSION
#define MAPL_VERSION "unknown"
#endif

namespace mapl::cli {

namespace {

using report::json;

// Raised for bad input that passed flag parsing (dimensions, vectors, files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InputError("failed writing '" + path + "'");
}

Eigen::VectorXd parse_vector(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string(flag) + ": cannot parse '" + item + "' as a number");
    }
  }
  if (values.empty()) throw InputError(std::string(flag) + ": empty vector");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
};

json manifest_base(const Context& ctx, const std::string& command) {
  return {{"tool", "mapl"},
          {"version", MAPL_VERSION},
          {"command", command},
          {"argv", ctx.args},
          {"timestamp", utc_timestamp()},
          {"threads", worker_count()}};
}

// Writes `text` to `path` with a manifest sidecar, or to stdout when no path
// was given.
void emit(const Context& ctx, const std::string& path, const std::string& text, json manifest) {
  if (path.empty() || path == "-") {
    ctx.out << text;
    return;
  }
  write_file(path, text);
  manifest["outputs"] = json::array({path});
  write_file(manifest_path(path), manifest.dump(2) + "\n");
}

void add_scenario(CLI::App* sub, ScenarioParams& s, bool with_rho = true) {
  sub->add_option("--n", s.n, "Sample size")->required();
  sub->add_option("--p", s.p, "Number of regression parameters in the full model")->required();
  if (with_rho) sub->add_option("--rho", s.rho, "Correlation of theta_hat and tau_hat")->required();
  sub->add_option("--alpha", s.alpha, "One minus the nominal coverage")->capture_default_str();
  sub->add_option("--penalty-d", s.d, "Penalty per parameter in the information criterion (2 = AIC)")
      ->capture_default_str();
}

void add_quadrature(CLI::App* sub, QuadratureConfig& q) {
  sub->add_option("--x-nodes", q.x_nodes, "Gauss-Legendre nodes for the x integral")->capture_default_str();
  sub->add_option("--y-nodes", q.y_nodes, "Gauss-Legendre nodes for the y integral")->capture_default_str();
  sub->add_option("--x-halfwidth", q.x_halfwidth, "Truncation radius of the x integral")->capture_default_str();
  sub->add_option("--error-tolerance", q.error_tolerance, "Largest accepted coverage error estimate")
      ->capture_default_str();
}

// ---------------------------------------------------------------------------

struct IntervalArgs {
  std::string data;
  bool header = false;
  std::string a, c, sidecar, out, format = "table";
  double t = 0.0;
  double alpha = 0.05;
  double d = 2.0;
};

std::string interval_table(const std::vector<IntervalResult>& results) {
  std::ostringstream s;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %14s %14s %14s %10s %s\n", "method", "lower", "upper", "length",
                "residual", "selected");
  s << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-14s %14.6f %14.6f %14.6f %10.2e %s\n", to_string(r.method), r.lower,
                  r.upper, r.length(), r.solver_residual, r.selected_model ? to_string(*r.selected_model) : "");
    s << line;
  }
  return s.str();
}

int cmd_interval(const Context& ctx, const IntervalArgs& a) {
  RegressionProblem problem;
  const RegressionData data = read_regression_csv(a.data, a.header);
  problem.X = data.X;
  problem.y_obs = data.y;
  problem.t = a.t;
  if (!a.sidecar.empty()) {
    std::ifstream f(a.sidecar);
    if (!f) throw InputError("cannot open sidecar '" + a.sidecar + "'");
    const json j = json::parse(f);
    const auto av = j.at("a").get<std::vector<double>>();
    const auto cv = j.at("c").get<std::vector<double>>();
    problem.a = Eigen::Map<const Eigen::VectorXd>(av.data(), static_cast<Eigen::Index>(av.size()));
    problem.c = Eigen::Map<const Eigen::VectorXd>(cv.data(), static_cast<Eigen::Index>(cv.size()));
    problem.t = j.value("t", a.t);
  }
  if (!a.a.empty()) problem.a = parse_vector(a.a, "--a");
  if (!a.c.empty()) problem.c = parse_vector(a.c, "--c");
  if (problem.a.size() == 0 || problem.c.size() == 0) throw InputError("supply --a and --c, or --sidecar");

  const ModelFit f = fit(problem);
  const std::vector<IntervalResult> results = all_intervals(f, a.alpha, a.d);

  json rep{{"fit", report::to_json(f)}, {"alpha", a.alpha}, {"d", a.d}, {"intervals", json::array()}};
  for (const auto& r : results) rep["intervals"].push_back(report::to_json(r));

  if (a.format == "json" && a.out.empty()) {
    ctx.out << rep.dump(2) << "\n";
    return kExitOk;
  }
  ctx.out << interval_table(results);
  if (!a.out.empty()) {
    json m = manifest_base(ctx, "interval");
    m["inputs"] = {{"data", a.data}, {"header", a.header}, {"sidecar", a.sidecar}};
    m["params"] = {{"alpha", a.alpha}, {"d", a.d}, {"t", problem.t}};
    emit(ctx, a.out, rep.dump(2) + "\n", m);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CurveArgs {
  ScenarioParams params;
  QuadratureConfig q;
  double gamma_min = 0.0;
  double gamma_max = 10.0;
  int steps = 41;
  double c_min = 0.0;  // 0: search
  double cmin_gamma_max = kMinCoverageGammaMax;
  std::string out;
};

int cmd_curve(const Context& ctx, const CurveArgs& a, bool length_columns) {
  a.params.validate();
  a.q.validate();
  if (a.steps < 1) throw InputError("--steps must be >= 1");
  if (!(a.gamma_max >= a.gamma_min)) throw InputError("--gamma-max must be >= --gamma-min");

  std::vector<double> grid;
  for (int k = 0; k < a.steps; ++k) {
    grid.push_back(a.steps == 1 ? a.gamma_min
                                : a.gamma_min + (a.gamma_max - a.gamma_min) * k / (a.steps - 1));
  }

  json cmin_record;
  double c_min = a.c_min;
  if (c_min > 0.0) {
    cmin_record = {{"c_min", c_min}, {"source", "supplied"}};
  } else {
    const MinCoverage m = min_coverage(a.params, a.q, a.cmin_gamma_max);
    c_min = m.c_min;
    cmin_record = report::to_json(m);
    cmin_record["source"] = "min_coverage";
  }

  const double denominator = scaled_length_denominator(a.params, c_min);
  std::string csv = length_columns ? "gamma,expected_length_factor,scaled_length\n" : "gamma,coverage,scaled_length\n";
  for (double g : grid) {
    const PointEvaluation e = evaluate_point(g, a.params, a.q);
    csv += number(g) + "," + number(length_columns ? e.length_factor : e.coverage) + "," +
           number(e.length_factor / denominator) + "\n";
  }

  json m = manifest_base(ctx, length_columns ? "length-curve" : "coverage-curve");
  m["params"] = report::to_json(a.params);
  m["quadrature"] = report::to_json(a.q);
  m["grid"] = {{"gamma_min", a.gamma_min}, {"gamma_max", a.gamma_max}, {"steps", a.steps}};
  m["c_min"] = cmin_record;
  emit(ctx, a.out, csv, m);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct MinCoverageArgs {
  ScenarioParams params;
  QuadratureConfig q;
  double gamma_max = kMinCoverageGammaMax;
  std::string out;
};

int cmd_min_coverage(const Context& ctx, const MinCoverageArgs& a) {
  const MinCoverage m = min_coverage(a.params, a.q, a.gamma_max);
  json r = report::to_json(m);
  r["params"] = report::to_json(a.params);
  r["corollary1_bound"] = corollary1_bound(a.params);
  json man = manifest_base(ctx, "min-coverage");
  man["params"] = report::to_json(a.params);
  man["quadrature"] = report::to_json(a.q);
  emit(ctx, a.out, r.dump(2) + "\n", man);
  return kExitOk;
}

struct BoundArgs {
  int n = 0, p = 0;
  double alpha = 0.05;
  std::string out;
};

int cmd_bound(const Context& ctx, const BoundArgs& a) {
  const double bound = corollary1_bound(a.n, a.p, a.alpha);
  json r{{"n", a.n},
         {"p", a.p},
         {"alpha", a.alpha},
         {"corollary1_bound", bound},
         {"asymptotic_limit", asymptotic_coverage_limit(static_cast<double>(a.p) / a.n, a.alpha)},
         {"profile_m2_half_width_factor", profile_m2_half_width_factor(a.n, a.p, a.alpha)}};
  json man = manifest_base(ctx, "bound");
  emit(ctx, a.out, r.dump(2) + "\n", man);
  return kExitOk;
}

struct CalibrateArgs {
  double u = 0.157;
  int n = 0, p = 0;
  std::string out;
};

int cmd_calibrate_d(const Context& ctx, const CalibrateArgs& a) {
  const double d = calibrate_d(a.u, a.n, a.p);
  json r{{"u", a.u}, {"n", a.n}, {"p", a.p}, {"d", d}, {"selection_test_level", selection_test_level(d, a.n, a.p)}};
  emit(ctx, a.out, r.dump(2) + "\n", manifest_base(ctx, "calibrate-d"));
  return kExitOk;
}

struct SimulateArgs {
  ScenarioParams params;
  double gamma = 0.0;
  std::int64_t replicates = 100000;
  std::uint64_t seed = 1;
  bool compare = false;
  std::string out;
};

int cmd_simulate(const Context& ctx, const SimulateArgs& a, bool naive) {
  SimConfig c;
  c.params = a.params;
  c.gamma = a.gamma;
  c.replicates = a.replicates;
  c.seed = a.seed;
  const SimResult s = naive ? simulate_naive_aic(c) : simulate_mpi(c);
  json r = report::to_json(s);
  r["method"] = naive ? "naive_aic" : "mpi";
  r["seed"] = a.seed;
  r["replicates"] = a.replicates;
  r["gamma"] = a.gamma;
  r["params"] = report::to_json(a.params);
  if (a.compare) r["quadrature_coverage"] = coverage_probability(a.gamma, a.params);
  json man = manifest_base(ctx, naive ? "simulate-naive" : "simulate");
  man["params"] = report::to_json(a.params);
  man["seed"] = a.seed;
  emit(ctx, a.out, r.dump(2) + "\n", man);
  return kExitOk;
}

void diagnostic(std::ostream& err, const char* category, const std::string& kind, const std::string& message) {
  err << json{{"error", category}, {"kind", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

std::string manifest_path(const std::string& output_path) { return output_path + ".manifest.json"; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model-averaged profile likelihood intervals: exact coverage, expected length and simulation"};
  app.name("mapl");
  app.set_version_flag("--version", MAPL_VERSION);
  app.require_subcommand(1);

  IntervalArgs interval_args;
  auto* interval = app.add_subcommand("interval", "Fit a regression from CSV and report all five intervals");
  interval->add_option("--data", interval_args.data, "CSV: response first, then model matrix columns")->required();
  interval->add_flag("--header", interval_args.header, "First CSV row is a header");
  interval->add_option("--a", interval_args.a, "theta = a'beta, comma separated");
  interval->add_option("--c", interval_args.c, "tau = c'beta - t, comma separated");
  interval->add_option("--t", interval_args.t, "Offset t in tau = c'beta - t")->capture_default_str();
  interval->add_option("--sidecar", interval_args.sidecar, "JSON file with a, c and optionally t");
  interval->add_option("--alpha", interval_args.alpha, "One minus the nominal coverage")->capture_default_str();
  interval->add_option("--penalty-d", interval_args.d, "Penalty per parameter (2 = AIC)")->capture_default_str();
  interval->add_option("--out", interval_args.out, "Write the JSON report here");
  interval->add_option("--format", interval_args.format, "Stdout format without --out")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  CurveArgs coverage_args, length_args;
  auto setup_curve = [&](CLI::App* sub, CurveArgs& a) {
    add_scenario(sub, a.params);
    add_quadrature(sub, a.q);
    sub->add_option("--gamma-min", a.gamma_min, "First gamma")->capture_default_str();
    sub->add_option("--gamma-max", a.gamma_max, "Last gamma")->capture_default_str();
    sub->add_option("--steps", a.steps, "Number of gamma values")->capture_default_str();
    sub->add_option("--c-min", a.c_min, "Minimum coverage for the scaled length (searched if omitted)");
    sub->add_option("--cmin-gamma-max", a.cmin_gamma_max, "Upper end of the c_min search range")
        ->capture_default_str();
    sub->add_option("--out", a.out, "CSV output path (stdout if omitted)");
  };
  auto* coverage = app.add_subcommand("coverage-curve", "CSV of gamma, coverage, scaled_length");
  setup_curve(coverage, coverage_args);
  auto* length = app.add_subcommand("length-curve", "CSV of gamma, expected_length_factor, scaled_length");
  setup_curve(length, length_args);

  MinCoverageArgs min_args;
  auto* min_cov = app.add_subcommand("min-coverage", "Minimum coverage over gamma in [0, gamma-max]");
  add_scenario(min_cov, min_args.params);
  add_quadrature(min_cov, min_args.q);
  min_cov->add_option("--gamma-max", min_args.gamma_max, "Upper end of the search range")->capture_default_str();
  min_cov->add_option("--out", min_args.out, "JSON output path");

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "Closed-form upper bound on the minimum coverage");
  bound->add_option("--n", bound_args.n, "Sample size")->required();
  bound->add_option("--p", bound_args.p, "Number of regression parameters")->required();
  bound->add_option("--alpha", bound_args.alpha, "One minus the nominal coverage")->capture_default_str();
  bound->add_option("--out", bound_args.out, "JSON output path");

  CalibrateArgs cal_args;
  auto* calibrate = app.add_subcommand("calibrate-d", "Penalty d giving a selection test of level u");
  calibrate->add_option("--u", cal_args.u, "Test level")->capture_default_str();
  calibrate->add_option("--n", cal_args.n, "Sample size")->required();
  calibrate->add_option("--p", cal_args.p, "Number of regression parameters")->required();
  calibrate->add_option("--out", cal_args.out, "JSON output path");

  SimulateArgs sim_args, naive_args;
  auto setup_sim = [&](CLI::App* sub, SimulateArgs& a) {
    add_scenario(sub, a.params);
    sub->add_option("--gamma", a.gamma, "Standardized constraint violation")->capture_default_str();
    sub->add_option("--replicates", a.replicates, "Monte Carlo replicates")->capture_default_str();
    sub->add_option("--seed", a.seed, "Master seed")->capture_default_str();
    sub->add_option("--out", a.out, "JSON output path");
  };
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage of the MPI");
  setup_sim(simulate, sim_args);
  simulate->add_flag("--compare", sim_args.compare, "Also report the quadrature coverage");
  auto* simulate_naive = app.add_subcommand("simulate-naive", "Monte Carlo coverage of the naive post-selection interval");
  setup_sim(simulate_naive, naive_args);

  std::string manifest_file;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("--manifest", manifest_file, "Manifest written next to an earlier output")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream ignored;
      app.exit(e, out, ignored);
      return kExitOk;
    }
    diagnostic(err, "usage", e.get_name(), e.what());
    return kExitUsage;
  }

  const Context ctx{args, out};
  try {
    if (*interval) return cmd_interval(ctx, interval_args);
    if (*coverage) return cmd_curve(ctx, coverage_args, false);
    if (*length) return cmd_curve(ctx, length_args, true);
    if (*min_cov) return cmd_min_coverage(ctx, min_args);
    if (*bound) return cmd_bound(ctx, bound_args);
    if (*calibrate) return cmd_calibrate_d(ctx, cal_args);
    if (*simulate) return cmd_simulate(ctx, sim_args, false);
    if (*simulate_naive) return cmd_simulate(ctx, naive_args, true);
    if (*replay) {
      std::ifstream f(manifest_file);
      if (!f) throw InputError("cannot open manifest '" + manifest_file + "'");
      const auto recorded = json::parse(f).at("argv").get<std::vector<std::string>>();
      if (recorded.empty() || recorded.front() == "replay") throw InputError("manifest does not hold a replayable command");
      return run(recorded, out, err);
    }
  } catch (const CsvError& e) {
    diagnostic(err, "input", "csv", e.what());
    return kExitUsage;
  } catch (const FitError& e) {
    diagnostic(err, "input", to_string(e.kind()), e.what());
    return kExitUsage;
  } catch (const InputError& e) {
    diagnostic(err, "input", "argument", e.what());
    return kExitUsage;
  } catch (const json::exception& e) {
    diagnostic(err, "input", "json", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    diagnostic(err, "input", "invalid_argument", e.what());
    return kExitUsage;
  } catch (const QuadratureError& e) {
    diagnostic(err, "numerical", "quadrature", e.what());
    return kExitNumerical;
  } catch (const SolverError& e) {
    diagnostic(err, "numerical", "solver", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    diagnostic(err, "numerical", "other", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace mapl::cli
