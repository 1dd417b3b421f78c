#include "mapl_cli/report.hpp"

namespace mapl::report {

json to_json(const IntervalResult& r) {
  json j{{"method", to_string(r.method)},
         {"lower", r.lower},
         {"upper", r.upper},
         {"nominal", r.nominal_coverage},
         {"residual", r.solver_residual},
         {"selected_model", nullptr}};
  if (r.selected_model) j["selected_model"] = to_string(*r.selected_model);
  return j;
}

IntervalResult interval_from_json(const json& j) {
  IntervalResult r;
  r.method = parse_interval_method(j.at("method").get<std::string>());
  r.lower = j.at("lower").get<double>();
  r.upper = j.at("upper").get<double>();
  r.nominal_coverage = j.at("nominal").get<double>();
  r.solver_residual = j.at("residual").get<double>();
  if (j.contains("selected_model") && !j.at("selected_model").is_null()) {
    r.selected_model = parse_selected_model(j.at("selected_model").get<std::string>());
  }
  return r;
}

json to_json(const ScenarioParams& p) {
  return {{"n", p.n}, {"p", p.p}, {"rho", p.rho}, {"alpha", p.alpha}, {"d", p.d}};
}

ScenarioParams params_from_json(const json& j) {
  return {j.at("n").get<int>(), j.at("p").get<int>(), j.at("rho").get<double>(), j.at("alpha").get<double>(),
          j.at("d").get<double>()};
}

json to_json(const QuadratureConfig& q) {
  return {{"x_nodes", q.x_nodes},
          {"y_nodes", q.y_nodes},
          {"panel_order", q.panel_order},
          {"x_halfwidth", q.x_halfwidth},
          {"y_bounds_tail", {q.y_lower_tail, q.y_upper_tail}},
          {"solver_tol", q.solver_tol},
          {"estimate_error", q.estimate_error},
          {"error_tolerance", q.error_tolerance}};
}

json to_json(const ModelFit& f) {
  return {{"theta_hat", f.theta_hat}, {"tau_hat", f.tau_hat}, {"sigma_hat", f.sigma_hat},
          {"v_theta", f.v_theta},     {"v_tau", f.v_tau},     {"rho", f.rho},
          {"n", f.n},                 {"p", f.p}};
}

json to_json(const SimResult& r) {
  json j{{"coverage_estimate", r.coverage_estimate},
         {"std_error", r.std_error},
         {"mean_length_factor", r.mean_length_factor},
         {"replicates_used", r.replicates_used},
         {"generator", r.generator},
         {"normal_method", r.normal_method},
         {"chi_square_method", r.chi_square_method}};
  if (r.selection_rate_m2) j["selection_rate_m2"] = *r.selection_rate_m2;
  return j;
}

json to_json(const MinCoverage& m) {
  return {{"c_min", m.c_min}, {"gamma_at_min", m.gamma_at_min}, {"gamma_range", {0.0, m.gamma_max}}};
}

}  // namespace mapl::report
