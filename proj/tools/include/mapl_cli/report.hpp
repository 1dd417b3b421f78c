#pragma once

// JSON forms of the library's result types.

#include <json.hpp>

#include "mapl/exact_eval.hpp"
#include "mapl/intervals.hpp"
#include "mapl/mc_oracle.hpp"
#include "mapl/regression.hpp"

namespace mapl::report {

using nlohmann::json;

/// {method, lower, upper, nominal, residual, selected_model}; selected_model
/// is null except for the naive interval.
json to_json(const IntervalResult& r);
IntervalResult interval_from_json(const json& j);

json to_json(const ScenarioParams& p);
ScenarioParams params_from_json(const json& j);

json to_json(const QuadratureConfig& q);
json to_json(const ModelFit& f);
json to_json(const SimResult& r);
json to_json(const MinCoverage& m);

}  // namespace mapl::report
