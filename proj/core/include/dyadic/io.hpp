#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>

#include "dyadic/step_function.hpp"

namespace dyadic {

/// {"n":..,"J":..,"values":[...]}; weights add "positive": true.
nlohmann::json to_json(const StepFunction& f, bool positive_marker = false);
StepFunction step_function_from_json(const nlohmann::json& j);

/// CSV with header "index,value", one row per finest cell in row-major order.
void write_csv(std::ostream& os, const StepFunction& f);
StepFunction read_csv(std::istream& is, const TreeParams& params);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace dyadic
