#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace refp {

// Integer affine expression; zero coefficients are never stored.
class LinExpr {
  public:
    LinExpr() = default;
    LinExpr(std::int64_t c) : constant_(c) {}

    static auto var(const std::string & name, std::int64_t coeff = 1) -> LinExpr;

    auto constant() const -> std::int64_t { return constant_; }
    auto coefficients() const -> const std::map<std::string, std::int64_t> & { return coeffs_; }
    auto coeff(const std::string & name) const -> std::int64_t;
    auto is_constant() const -> bool { return coeffs_.empty(); }
    auto variables() const -> std::vector<std::string>;
    auto mentions(const std::string & name) const -> bool { return coeffs_.count(name) > 0; }

    auto substitute(const std::string & name, const LinExpr & by) const -> LinExpr;
    auto rename(const std::string & from, const std::string & to) const -> LinExpr;
    // Throws Error when a variable has no value.
    auto evaluate(const std::map<std::string, std::int64_t> & values) const -> std::int64_t;

    auto operator+=(const LinExpr & o) -> LinExpr &;
    auto operator-=(const LinExpr & o) -> LinExpr &;
    auto operator*=(std::int64_t k) -> LinExpr &;

    friend auto operator+(LinExpr a, const LinExpr & b) -> LinExpr { return a += b; }
    friend auto operator-(LinExpr a, const LinExpr & b) -> LinExpr { return a -= b; }
    friend auto operator*(LinExpr a, std::int64_t k) -> LinExpr { return a *= k; }
    friend auto operator*(std::int64_t k, LinExpr a) -> LinExpr { return a *= k; }
    friend auto operator-(LinExpr a) -> LinExpr { return a *= -1; }

    friend auto operator==(const LinExpr &, const LinExpr &) -> bool = default;
    friend auto operator<=>(const LinExpr &, const LinExpr &) = default;

  private:
    std::int64_t constant_ = 0;
    std::map<std::string, std::int64_t> coeffs_;
};

// "Delta - 2*d - 1"
auto to_string(const LinExpr & e) -> std::string;
// {"const": c, "<var>": coeff, ...}
auto linexpr_to_json(const LinExpr & e) -> nlohmann::json;
auto linexpr_from_json(const nlohmann::json & j) -> LinExpr;

enum class Rel { le, ge, eq };

auto to_string(Rel r) -> std::string;
auto parse_rel(const std::string & s) -> Rel;

struct Inequality {
    LinExpr lhs;
    Rel rel = Rel::le;
    LinExpr rhs;
    std::string tag;  // where it came from, for reports

    // lhs - rhs for >= and =, rhs - lhs for <=: the inequality reads g >= 0 (or g = 0).
    auto normal() const -> LinExpr;
    auto holds(const std::map<std::string, std::int64_t> & values) const -> bool;
    // Both sides constant and the relation satisfied.
    auto trivially_true() const -> bool;
    // Integer negation: not(e <= v) is e >= v + 1. Throws on equalities.
    auto negated() const -> Inequality;
    auto rename(const std::string & from, const std::string & to) const -> Inequality;

    friend auto operator==(const Inequality & a, const Inequality & b) -> bool
    {
        return a.lhs == b.lhs && a.rel == b.rel && a.rhs == b.rhs;
    }
};

auto to_string(const Inequality & q) -> std::string;
auto inequality_to_json(const Inequality & q) -> nlohmann::json;
auto inequality_from_json(const nlohmann::json & j) -> Inequality;

struct IneqSystem {
    std::vector<std::string> variables;
    std::vector<Inequality> inequalities;

    // Throws Error naming the first undeclared variable.
    void check_declared() const;
};

auto system_to_json(const IneqSystem & s) -> nlohmann::json;
auto system_from_json(const nlohmann::json & j) -> IneqSystem;

}
