#include <refp/errors.hpp>
#include <refp/linexpr.hpp>

#include <algorithm>
#include <set>

namespace refp {

namespace {

    auto add_term(std::map<std::string, std::int64_t> & m, const std::string & name, std::int64_t c)
    {
        if (c == 0)
            return;
        auto & v = m[name];
        v += c;
        if (v == 0)
            m.erase(name);
    }

}

auto LinExpr::var(const std::string & name, std::int64_t coeff) -> LinExpr
{
    LinExpr e;
    add_term(e.coeffs_, name, coeff);
    return e;
}

auto LinExpr::coeff(const std::string & name) const -> std::int64_t
{
    auto it = coeffs_.find(name);
    return it == coeffs_.end() ? 0 : it->second;
}

auto LinExpr::variables() const -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (auto & [n, c] : coeffs_)
        out.push_back(n);
    return out;
}

auto LinExpr::substitute(const std::string & name, const LinExpr & by) const -> LinExpr
{
    auto c = coeff(name);
    if (c == 0)
        return *this;
    LinExpr out = *this;
    out.coeffs_.erase(name);
    return out + by * c;
}

auto LinExpr::rename(const std::string & from, const std::string & to) const -> LinExpr
{
    return substitute(from, var(to));
}

auto LinExpr::evaluate(const std::map<std::string, std::int64_t> & values) const -> std::int64_t
{
    auto v = constant_;
    for (auto & [n, c] : coeffs_) {
        auto it = values.find(n);
        if (it == values.end())
            throw Error("no value for variable " + n);
        v += c * it->second;
    }
    return v;
}

auto LinExpr::operator+=(const LinExpr & o) -> LinExpr &
{
    constant_ += o.constant_;
    for (auto & [n, c] : o.coeffs_)
        add_term(coeffs_, n, c);
    return *this;
}

auto LinExpr::operator-=(const LinExpr & o) -> LinExpr &
{
    return *this += o * -1;
}

auto LinExpr::operator*=(std::int64_t k) -> LinExpr &
{
    constant_ *= k;
    if (k == 0)
        coeffs_.clear();
    for (auto & [n, c] : coeffs_)
        c *= k;
    return *this;
}

auto to_string(const LinExpr & e) -> std::string
{
    std::string out;
    auto term = [&](std::int64_t c, const std::string & name) {
        auto mag = c < 0 ? -c : c;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (name.empty())
            out += std::to_string(mag);
        else
            out += (mag == 1 ? "" : std::to_string(mag) + "*") + name;
    };
    for (auto & [n, c] : e.coefficients())
        term(c, n);
    if (e.constant() != 0 || out.empty())
        term(e.constant(), "");
    return out;
}

auto linexpr_to_json(const LinExpr & e) -> nlohmann::json
{
    auto j = nlohmann::json::object();
    if (e.constant() != 0)
        j["const"] = e.constant();
    for (auto & [n, c] : e.coefficients())
        j[n] = c;
    return j;
}

auto linexpr_from_json(const nlohmann::json & j) -> LinExpr
{
    if (j.is_number_integer())
        return LinExpr(j.get<std::int64_t>());
    if (! j.is_object())
        throw Error("linear expression must be an object of coefficients");
    LinExpr e;
    for (auto & [k, v] : j.items()) {
        if (! v.is_number_integer())
            throw Error("coefficient of " + k + " is not an integer");
        if (k == "const")
            e += LinExpr(v.get<std::int64_t>());
        else
            e += LinExpr::var(k, v.get<std::int64_t>());
    }
    return e;
}

auto to_string(Rel r) -> std::string
{
    switch (r) {
    case Rel::le:
        return "<=";
    case Rel::ge:
        return ">=";
    case Rel::eq:
        return "=";
    }
    return "?";
}

auto parse_rel(const std::string & s) -> Rel
{
    if (s == "<=")
        return Rel::le;
    if (s == ">=")
        return Rel::ge;
    if (s == "=" || s == "==")
        return Rel::eq;
    throw Error("unknown relation '" + s + "'");
}

auto Inequality::normal() const -> LinExpr
{
    return rel == Rel::le ? rhs - lhs : lhs - rhs;
}

auto Inequality::holds(const std::map<std::string, std::int64_t> & values) const -> bool
{
    auto g = normal().evaluate(values);
    return rel == Rel::eq ? g == 0 : g >= 0;
}

auto Inequality::trivially_true() const -> bool
{
    auto g = normal();
    if (! g.is_constant())
        return false;
    return rel == Rel::eq ? g.constant() == 0 : g.constant() >= 0;
}

auto Inequality::negated() const -> Inequality
{
    Inequality q = *this;
    switch (rel) {
    case Rel::le:
        q.rel = Rel::ge;
        q.rhs = rhs + 1;
        break;
    case Rel::ge:
        q.rel = Rel::le;
        q.rhs = rhs - 1;
        break;
    case Rel::eq:
        throw Error("cannot negate an equality into a single inequality");
    }
    q.tag = "not " + tag;
    return q;
}

auto Inequality::rename(const std::string & from, const std::string & to) const -> Inequality
{
    Inequality q = *this;
    q.lhs = lhs.rename(from, to);
    q.rhs = rhs.rename(from, to);
    return q;
}

auto to_string(const Inequality & q) -> std::string
{
    return to_string(q.lhs) + " " + to_string(q.rel) + " " + to_string(q.rhs);
}

auto inequality_to_json(const Inequality & q) -> nlohmann::json
{
    nlohmann::json j{{"lhs", linexpr_to_json(q.lhs)}, {"rel", to_string(q.rel)}, {"rhs", linexpr_to_json(q.rhs)}};
    if (! q.tag.empty())
        j["tag"] = q.tag;
    return j;
}

auto inequality_from_json(const nlohmann::json & j) -> Inequality
{
    if (! j.is_object() || ! j.contains("lhs") || ! j.contains("rel") || ! j.contains("rhs"))
        throw Error("inequality needs lhs, rel and rhs");
    Inequality q;
    q.lhs = linexpr_from_json(j.at("lhs"));
    q.rel = parse_rel(j.at("rel").get<std::string>());
    q.rhs = linexpr_from_json(j.at("rhs"));
    if (j.contains("tag"))
        q.tag = j.at("tag").get<std::string>();
    return q;
}

void IneqSystem::check_declared() const
{
    std::set<std::string> decl(variables.begin(), variables.end());
    for (auto & q : inequalities)
        for (auto * side : {&q.lhs, &q.rhs})
            for (auto & [n, c] : side->coefficients())
                if (! decl.count(n))
                    throw Error("undeclared variable " + n + " in " + to_string(q));
}

auto system_to_json(const IneqSystem & s) -> nlohmann::json
{
    auto qs = nlohmann::json::array();
    for (auto & q : s.inequalities)
        qs.push_back(inequality_to_json(q));
    return {{"variables", s.variables}, {"inequalities", qs}};
}

auto system_from_json(const nlohmann::json & j) -> IneqSystem
{
    IneqSystem s;
    s.variables = j.at("variables").get<std::vector<std::string>>();
    for (auto & q : j.at("inequalities"))
        s.inequalities.push_back(inequality_from_json(q));
    s.check_declared();
    return s;
}

}
