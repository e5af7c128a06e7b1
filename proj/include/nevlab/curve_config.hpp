#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nevlab/entire_curve.hpp"

namespace nevlab::config {

// Builds a curve from its JSON description (see docs/curve_grammar.md).
// Throws InputError with a readable message on malformed input.
curves::EntireCurve load_curve(const nlohmann::json& j);
curves::EntireCurve load_curve_file(const std::string& path);

// Reads a JSON file; InputError on I/O or syntax errors.
nlohmann::json read_json_file(const std::string& path);

// Named fixtures: identity, exp, exp-affine, exp-plane, interpolation, tuned.
nlohmann::json builtin_curve_config(const std::string& name);
std::vector<std::string> builtin_curve_names();

}  // namespace nevlab::config
