#pragma once

#include <refp/problem.hpp>

#include <nlohmann/json.hpp>

namespace refp {

auto configuration_to_json(const Configuration & c, const std::vector<std::string> & names) -> nlohmann::json;
auto problem_to_json(const Problem & p) -> nlohmann::json;
// Accepts the mirror produced by problem_to_json; throws Error on malformed input.
auto problem_from_json(const nlohmann::json & j) -> Problem;

}
