#include <refp/errors.hpp>
#include <refp/fm.hpp>

#include <algorithm>
#include <unordered_map>

namespace refp {

namespace {

    // coeffs . vars + constant  (>= 0 or = 0)
    struct Row {
        std::vector<Rational> coeffs;
        Rational constant;
        std::vector<Rational> mult;  // over the system's inequalities
    };

    auto is_zero(const Row & r) -> bool
    {
        return std::all_of(r.coeffs.begin(), r.coeffs.end(), [](const Rational & c) { return c == 0; });
    }

    // r += k * o
    void axpy(Row & r, const Rational & k, const Row & o)
    {
        for (std::size_t i = 0; i < r.coeffs.size(); ++i)
            if (o.coeffs[i] != 0)
                r.coeffs[i] += k * o.coeffs[i];
        r.constant += k * o.constant;
        for (std::size_t i = 0; i < r.mult.size(); ++i)
            if (o.mult[i] != 0)
                r.mult[i] += k * o.mult[i];
    }

    void scale(Row & r, const Rational & k)
    {
        for (auto & c : r.coeffs)
            c *= k;
        r.constant *= k;
        for (auto & m : r.mult)
            m *= k;
    }

    // Scales so the first nonzero coefficient has magnitude 1.
    void normalize(Row & r)
    {
        for (auto & c : r.coeffs)
            if (c != 0) {
                Rational k = 1 / abs(c);
                if (k != 1)
                    scale(r, k);
                return;
            }
    }

    auto key_of(const Row & r) -> std::string
    {
        std::string k;
        for (auto & c : r.coeffs) {
            k += c.str();
            k += ',';
        }
        return k;
    }

    struct Level {
        std::size_t var;
        std::vector<Row> rows;  // rows mentioning var, before elimination
    };

    struct Substitution {
        std::size_t var;
        Row eq;  // eq.coeffs[var] != 0
    };

    auto value_from(const Row & r, std::size_t var, const std::vector<Rational> & x) -> Rational
    {
        // r.coeffs[var] * v + rest >= 0
        Rational rest = r.constant;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (i != var && r.coeffs[i] != 0)
                rest += r.coeffs[i] * x[i];
        return -rest / r.coeffs[var];
    }

}

auto to_string(const Rational & q) -> std::string
{
    return q.str();
}

auto check_certificate(const IneqSystem & s, const std::vector<Rational> & lambda) -> std::optional<Rational>
{
    if (lambda.size() != s.inequalities.size())
        return std::nullopt;
    std::map<std::string, Rational> sum;
    Rational c = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        auto & q = s.inequalities[i];
        if (q.rel != Rel::eq && lambda[i] < 0)
            return std::nullopt;
        if (lambda[i] == 0)
            continue;
        auto g = q.normal();
        c += lambda[i] * g.constant();
        for (auto & [n, k] : g.coefficients())
            sum[n] += lambda[i] * k;
    }
    for (auto & [n, k] : sum)
        if (k != 0)
            return std::nullopt;
    if (c >= 0)
        return std::nullopt;
    return -c;
}

auto satisfies(const IneqSystem & s, const std::map<std::string, Rational> & point) -> bool
{
    for (auto & q : s.inequalities) {
        auto g = q.normal();
        Rational v = g.constant();
        for (auto & [n, k] : g.coefficients()) {
            auto it = point.find(n);
            if (it == point.end())
                return false;
            v += k * it->second;
        }
        if (q.rel == Rel::eq ? v != 0 : v < 0)
            return false;
    }
    return true;
}

auto infeasible_over_reals(const IneqSystem & s, const FmOptions & opts) -> FmResult
{
    s.check_declared();
    auto n = s.variables.size();
    auto m = s.inequalities.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i)
        index[s.variables[i]] = i;

    FmResult res;
    auto fail_with = [&](const Row & r) {
        res.infeasible = true;
        res.certificate = r.mult;
        res.contradiction = -r.constant;
        if (! check_certificate(s, res.certificate))
            throw Error("internal error: Fourier-Motzkin certificate does not verify");
        return res;
    };

    std::vector<Row> eqs, rows;
    for (std::size_t i = 0; i < m; ++i) {
        Row r;
        r.coeffs.assign(n, 0);
        r.mult.assign(m, 0);
        r.mult[i] = 1;
        auto g = s.inequalities[i].normal();
        r.constant = g.constant();
        for (auto & [name, c] : g.coefficients())
            r.coeffs[index.at(name)] = c;
        (s.inequalities[i].rel == Rel::eq ? eqs : rows).push_back(std::move(r));
    }

    // equalities first
    std::vector<Substitution> subs;
    while (! eqs.empty()) {
        auto e = std::move(eqs.back());
        eqs.pop_back();
        auto piv = std::find_if(e.coeffs.begin(), e.coeffs.end(), [](const Rational & c) { return c != 0; });
        if (piv == e.coeffs.end()) {
            if (e.constant == 0)
                continue;
            if (e.constant > 0)
                scale(e, -1);
            return fail_with(e);
        }
        auto v = static_cast<std::size_t>(piv - e.coeffs.begin());
        for (auto * set : {&eqs, &rows})
            for (auto & r : *set)
                if (r.coeffs[v] != 0)
                    axpy(r, -r.coeffs[v] / e.coeffs[v], e);
        subs.push_back({v, std::move(e)});
    }

    std::vector<Row> cur;
    for (auto & r : rows) {
        if (is_zero(r)) {
            if (r.constant < 0)
                return fail_with(r);
            continue;
        }
        cur.push_back(std::move(r));
    }
    for (auto & r : cur)
        normalize(r);

    std::vector<bool> gone(n, false);
    for (auto & sub : subs)
        gone[sub.var] = true;
    std::vector<Level> levels;
    std::size_t order_pos = 0;
    res.peak_rows = cur.size();

    for (;;) {
        std::vector<std::size_t> pos(n, 0), neg(n, 0);
        for (auto & r : cur)
            for (std::size_t i = 0; i < n; ++i) {
                if (r.coeffs[i] > 0)
                    ++pos[i];
                else if (r.coeffs[i] < 0)
                    ++neg[i];
            }
        std::optional<std::size_t> pick;
        if (opts.order)
            while (! pick && order_pos < opts.order->size()) {
                auto it = index.find((*opts.order)[order_pos++]);
                if (it == index.end())
                    throw Error("elimination order names an unknown variable");
                if (! gone[it->second] && pos[it->second] + neg[it->second] > 0)
                    pick = it->second;
            }
        if (! pick)
            for (std::size_t i = 0; i < n; ++i) {
                if (gone[i] || pos[i] + neg[i] == 0)
                    continue;
                if (! pick || pos[i] * neg[i] < pos[*pick] * neg[*pick])
                    pick = i;
            }
        if (! pick)
            break;
        auto v = *pick;
        gone[v] = true;
        res.eliminated.push_back(s.variables[v]);

        Level lvl{v, {}};
        std::vector<Row> P, N, next;
        for (auto & r : cur) {
            if (r.coeffs[v] > 0)
                P.push_back(r);
            else if (r.coeffs[v] < 0)
                N.push_back(r);
            else
                next.push_back(std::move(r));
        }
        std::unordered_map<std::string, std::size_t> seen;
        for (std::size_t i = 0; i < next.size(); ++i)
            seen[key_of(next[i])] = i;
        for (auto & p : P)
            for (auto & q : N) {
                Row r = p;
                scale(r, -q.coeffs[v]);
                axpy(r, p.coeffs[v], q);
                r.coeffs[v] = 0;
                if (is_zero(r)) {
                    if (r.constant < 0)
                        return fail_with(r);
                    continue;
                }
                normalize(r);
                auto k = key_of(r);
                auto it = seen.find(k);
                if (it == seen.end()) {
                    seen.emplace(k, next.size());
                    next.push_back(std::move(r));
                }
                else if (r.constant < next[it->second].constant)
                    next[it->second] = std::move(r);
            }
        if (next.size() > opts.max_rows)
            throw BudgetExceeded("Fourier-Motzkin row budget exceeded (" + std::to_string(next.size()) + " rows)");
        res.peak_rows = std::max(res.peak_rows, next.size());
        lvl.rows = std::move(P);
        lvl.rows.insert(lvl.rows.end(), std::make_move_iterator(N.begin()), std::make_move_iterator(N.end()));
        levels.push_back(std::move(lvl));
        cur = std::move(next);
    }

    // feasible: back-substitute, last eliminated first
    std::vector<Rational> x(n, 0);
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        std::optional<Rational> lo, hi;
        for (auto & r : it->rows) {
            auto b = value_from(r, it->var, x);
            if (r.coeffs[it->var] > 0)
                lo = lo ? std::max(*lo, b) : b;
            else
                hi = hi ? std::min(*hi, b) : b;
        }
        if (lo)
            x[it->var] = *lo;
        else
            x[it->var] = *hi < 0 ? *hi : Rational(0);
    }
    for (auto it = subs.rbegin(); it != subs.rend(); ++it)
        x[it->var] = value_from(it->eq, it->var, x);
    for (std::size_t i = 0; i < n; ++i)
        res.witness[s.variables[i]] = x[i];
    if (! satisfies(s, res.witness))
        throw Error("internal error: Fourier-Motzkin witness does not satisfy the system");
    return res;
}

auto fm_result_to_json(const IneqSystem & s, const FmResult & r) -> nlohmann::json
{
    nlohmann::json j{{"verdict", r.infeasible ? "infeasible" : "feasible"}, {"eliminated", r.eliminated}};
    if (r.infeasible) {
        auto cert = nlohmann::json::array();
        for (std::size_t i = 0; i < r.certificate.size(); ++i)
            if (r.certificate[i] != 0)
                cert.push_back({{"index", i},
                                {"multiplier", to_string(r.certificate[i])},
                                {"inequality", to_string(s.inequalities[i])},
                                {"tag", s.inequalities[i].tag}});
        j["certificate"] = cert;
        j["contradiction"] = "0 >= " + to_string(r.contradiction);
    }
    else {
        auto w = nlohmann::json::object();
        for (auto & [n, v] : r.witness)
            w[n] = to_string(v);
        j["witness"] = w;
    }
    return j;
}

}
