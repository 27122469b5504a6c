#pragma once

#include <refp/linexpr.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <nlohmann/json.hpp>

namespace refp {

using Rational = boost::multiprecision::mpq_rational;

struct FmOptions {
    // Elimination order; variables not listed go last, in heuristic order.
    std::optional<std::vector<std::string>> order;
    std::size_t max_rows = 200000;
};

struct FmResult {
    bool infeasible = false;
    // infeasible: one multiplier per inequality of the system, >= 0 except on
    // equalities; sum of multiplier * normal() is the constant -contradiction.
    std::vector<Rational> certificate;
    Rational contradiction;
    // feasible: a point satisfying every inequality
    std::map<std::string, Rational> witness;
    std::vector<std::string> eliminated;
    std::size_t peak_rows = 0;
};

// Exact Fourier-Motzkin over the rationals. Throws BudgetExceeded past max_rows.
auto infeasible_over_reals(const IneqSystem & s, const FmOptions & opts = {}) -> FmResult;

// The c > 0 with sum lambda_i * normal_i == -c, if lambda is a valid certificate.
auto check_certificate(const IneqSystem & s, const std::vector<Rational> & lambda) -> std::optional<Rational>;
auto satisfies(const IneqSystem & s, const std::map<std::string, Rational> & point) -> bool;

auto to_string(const Rational & q) -> std::string;
auto fm_result_to_json(const IneqSystem & s, const FmResult & r) -> nlohmann::json;

}
