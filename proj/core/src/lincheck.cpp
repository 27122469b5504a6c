#include <refp/catalog.hpp>
#include <refp/errors.hpp>
#include <refp/lincheck.hpp>

#include <algorithm>
#include <set>
#include <sstream>

using std::string;
using std::vector;

namespace refp::lincheck {

using refp::to_string;

namespace {

    auto tagged(Inequality q, const string & tag) -> Inequality
    {
        q.tag = tag;
        return q;
    }

    auto le(const LinExpr & a, const LinExpr & b, const string & tag = {}) -> Inequality
    {
        return {a, Rel::le, b, tag};
    }

    auto ge(const LinExpr & a, const LinExpr & b, const string & tag = {}) -> Inequality
    {
        return {a, Rel::ge, b, tag};
    }

    auto eq(const LinExpr & a, const LinExpr & b, const string & tag = {}) -> Inequality
    {
        return {a, Rel::eq, b, tag};
    }

    auto x_name(std::size_t i, std::size_t j) -> string
    {
        return "x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    }

    auto label_id(const Diagram & d, const string & name) -> LabelId
    {
        auto id = d.find(name);
        if (! id)
            throw Error("label " + name + " is not a diagram node");
        return *id;
    }

    // Builds the catalog line by line; free-variable lines get exponent
    // nonnegativity for every exponent mentioning the variable.
    class Builder {
      public:
        explicit Builder(LineCatalog & out) : out_(out) {}

        void start_case(int c)
        {
            case_ = c;
            row_ = 0;
        }

        void line(vector<ParamPart> parts, vector<Inequality> guards = {}, bool free = false)
        {
            ParamLine l;
            l.id = std::to_string(case_) + "." + std::to_string(++row_);
            l.parts = std::move(parts);
            l.side = std::move(guards);
            if (free) {
                l.free_var = "j";
                for (auto & p : l.parts) {
                    if (! p.exp.mentions("j"))
                        continue;
                    auto q = ge(p.exp, 0);
                    if (std::find(l.side.begin(), l.side.end(), q) == l.side.end())
                        l.side.push_back(q);
                }
            }
            out_[l.id] = std::move(l);
        }

      private:
        LineCatalog & out_;
        int case_ = 0, row_ = 0;
    };

    auto product_size(const vector<vector<Inequality>> & p) -> std::size_t
    {
        std::size_t n = 1;
        for (auto & v : p)
            n *= v.size();
        return n;
    }

}

auto ParamLine::total() const -> LinExpr
{
    LinExpr s;
    for (auto & p : parts)
        s += p.exp;
    return s;
}

auto ParamLine::rename(const string & from, const string & to) const -> ParamLine
{
    ParamLine l = *this;
    for (auto & p : l.parts)
        p.exp = p.exp.rename(from, to);
    for (auto & q : l.side)
        q = q.rename(from, to);
    if (free_var == from)
        l.free_var = to;
    return l;
}

auto ParamLine::instantiate(const std::map<string, std::int64_t> & values) const
    -> std::optional<vector<std::pair<string, std::int64_t>>>
{
    for (auto & q : side)
        if (! q.holds(values))
            return std::nullopt;
    vector<std::pair<string, std::int64_t>> out;
    for (auto & p : parts) {
        auto e = p.exp.evaluate(values);
        if (e < 0)
            return std::nullopt;
        if (e > 0)
            out.emplace_back(p.label, e);
    }
    return out;
}

auto to_string(const ParamLine & l) -> string
{
    string out;
    for (auto & p : l.parts) {
        out += out.empty() ? "" : " ";
        out += p.label;
        if (p.exp != LinExpr(1))
            out += "^(" + to_string(p.exp) + ")";
    }
    return out;
}

auto param_line_to_json(const ParamLine & l) -> nlohmann::json
{
    auto parts = nlohmann::json::array();
    for (auto & p : l.parts)
        parts.push_back({{"label", p.label}, {"exp", linexpr_to_json(p.exp)}});
    auto side = nlohmann::json::array();
    for (auto & q : l.side)
        side.push_back(inequality_to_json(q));
    nlohmann::json j{{"id", l.id}, {"parts", parts}, {"side", side}};
    if (l.free_var)
        j["free"] = *l.free_var;
    return j;
}

auto param_line_from_json(const nlohmann::json & j) -> ParamLine
{
    ParamLine l;
    l.id = j.value("id", "");
    for (auto & p : j.at("parts"))
        l.parts.push_back({p.at("label").get<string>(), linexpr_from_json(p.at("exp"))});
    if (j.contains("side"))
        for (auto & q : j.at("side"))
            l.side.push_back(inequality_from_json(q));
    if (j.contains("free"))
        l.free_var = j.at("free").get<string>();
    return l;
}

auto def3col_lines() -> LineCatalog
{
    LineCatalog out;
    Builder b(out);
    auto D = LinExpr::var("Delta"), d = LinExpr::var("d"), j = LinExpr::var("j");
    auto gt = ge(D, 3 * d + 3), lq = le(D, 3 * d + 2);
    vector<Inequality> eq2{le(D, 2 * d + 4), ge(D, 2 * d + 4)};

    int c = 1;
    for (auto [x, ax, cx, acx] : {std::tuple{"X", "AX", "CX", "ACX"}, std::tuple{"Y", "BY", "CY", "BCY"}}) {
        b.start_case(c++);
        b.line({{"_", d + 1}, {cx, d}, {acx, D - 2 * d - 1}});
        b.line({{x, 2 * d + 1}, {acx, D - 2 * d - 1}});
        b.line({{x, d}, {ax, D - d}});
    }
    for (auto [x, cx, acxy, axy] : {std::tuple{"X", "CX", "ACXY+", "AXY+"}, std::tuple{"Y", "CY", "BCXY+", "BXY+"}}) {
        b.start_case(c++);
        b.line({{"_", d + 1}, {cx, d + 1}, {acxy, d}, {"ABCXY+", D - 3 * d - 2}}, {gt});
        b.line({{"_", d + 1}, {cx, d + 1}, {acxy, D - 2 * d - 2}}, {lq});
        b.line({{x, 2 * d + 2}, {acxy, d}, {"ABCXY+", D - 3 * d - 2}}, {gt});
        b.line({{x, 2 * d + 2}, {acxy, D - 2 * d - 2}}, {lq});
        b.line({{x, d + 1}, {axy, 2 * d + 1}, {"ABCXY+", D - 3 * d - 2}}, {gt});
        b.line({{x, d + 1}, {axy, D - d - 1}}, {lq});
        b.line({{x, d + 1}, {axy, d}, {"ABXY+", D - 2 * d - 1}});
    }
    // j >= 0 on every row; the second row would otherwise admit j = -1 at Delta = 6
    b.start_case(5);
    auto tail = D - 3 * d - 2 + j;
    vector<Inequality> j0{ge(j, 0)};
    b.line({{"_", d + 2}, {"CXY", j}, {"ACXY+", d - j}, {"BCXY+", d - j}, {"ABCXY+", tail}}, j0, true);
    b.line({{"_", 1}, {"XY", d + 1 + j}, {"ACXY+", d - j}, {"BCXY+", d - j}, {"ABCXY+", tail}}, j0, true);
    b.line({{"_", 1}, {"XY", j}, {"AXY+", 2 * d + 1 - j}, {"BCXY+", d - j}, {"ABCXY+", tail}}, j0, true);
    b.line({{"_", 1}, {"XY", j}, {"ACXY+", d - j}, {"BXY+", 2 * d + 1 - j}, {"ABCXY+", tail}}, j0, true);
    b.line({{"_", 1}, {"XY", j}, {"AXY+", d - j}, {"BXY+", d - j}, {"ABXY+", D - 2 * d - 1 + j}}, j0, true);

    b.start_case(6);
    b.line({{"_", d + 1}, {"CXY", d + 1}, {"CXY+", 1}, {"ABCXY+", 1}}, eq2);
    b.line({{"_", d + 1}, {"CXY", 3 * d + 4 - D}, {"CXY+", 2 * D - 4 * d - 5}}, {lq});
    b.line({{"XY", 2 * d + 2}, {"CXY+", 1}, {"ABCXY+", 1}}, eq2);
    b.line({{"XY", 4 * d + 5 - D}, {"CXY+", 2 * D - 4 * d - 5}}, {lq});
    b.line({{"XY", d + 1}, {"XY+", d + 2}, {"ABCXY+", 1}}, eq2);
    b.line({{"XY", 3 * d + 4 - D}, {"XY+", 2 * D - 3 * d - 4}}, {lq});
    b.line({{"XY", j}, {"XY+", 2 * d + 3 - 2 * j}, {"ABXY+", D + j - 2 * d - 3}}, {ge(j, 2), le(j, d + 1)}, true);

    b.start_case(7);
    b.line({{"_", d}, {"C", D - d}});
    return out;
}

auto def3col_assumptions() -> vector<Inequality>
{
    auto D = LinExpr::var("Delta"), d = LinExpr::var("d");
    return {ge(d, 1, "A1"), le(D, 2 * d + 4, "A1"), ge(D, 2 * d + 3, "A1"), ge(D, 5, "A1")};
}

auto def3col_diagram() -> Diagram
{
    return catalog::generate_diagram({catalog::Family::def3col_fp, 5, 3});
}

auto right_closed_cuts(const ParamLine & t, const Diagram & d) -> vector<LabelSet>
{
    // distinct labels in order of first occurrence
    vector<LabelId> ids;
    for (auto & p : t.parts) {
        auto id = label_id(d, p.label);
        if (std::find(ids.begin(), ids.end(), id) == ids.end())
            ids.push_back(id);
    }
    auto n = ids.size();
    if (n > 20)
        throw BudgetExceeded("line has too many distinct labels for cut enumeration");
    vector<std::pair<vector<std::size_t>, LabelSet>> cuts;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool closed = true;
        for (std::size_t a = 0; a < n && closed; ++a)
            if (mask >> a & 1)
                for (std::size_t b = 0; b < n; ++b)
                    if (! (mask >> b & 1) && d.reaches(ids[a], ids[b])) {
                        closed = false;
                        break;
                    }
        if (! closed)
            continue;
        vector<std::size_t> pos;
        LabelSet s;
        for (std::size_t a = 0; a < n; ++a)
            if (mask >> a & 1) {
                pos.push_back(a);
                s |= LabelSet::singleton(ids[a]);
            }
        cuts.emplace_back(std::move(pos), std::move(s));
    }
    std::sort(cuts.begin(), cuts.end(), [](auto & x, auto & y) {
        if (x.first.size() != y.first.size())
            return x.first.size() < y.first.size();
        return x.first < y.first;
    });
    vector<LabelSet> out;
    for (auto & c : cuts)
        out.push_back(std::move(c.second));
    return out;
}

auto hall_inequalities(const ParamLine & c, const ParamLine & t, const Diagram & d) -> vector<Inequality>
{
    LabelSet t_labels;
    for (auto & p : t.parts)
        t_labels |= LabelSet::singleton(label_id(d, p.label));
    vector<Inequality> out;
    for (auto & r : right_closed_cuts(t, d)) {
        LinExpr x, tr;
        for (auto & p : c.parts) {
            auto id = label_id(d, p.label);
            if ((d.succ(id) & t_labels).subset_of(r))
                x += p.exp;
        }
        string names;
        vector<string> seen;
        for (auto & p : t.parts)
            if (r.contains(label_id(d, p.label))) {
                tr += p.exp;
                if (std::find(seen.begin(), seen.end(), p.label) == seen.end()) {
                    seen.push_back(p.label);
                    names += (names.empty() ? "" : " ") + p.label;
                }
            }
        auto q = le(x, tr, "cut {" + names + "}");
        if (! q.trivially_true())
            out.push_back(std::move(q));
    }
    return out;
}

auto build_combined_line(const ParamLine & l1, const ParamLine & l2, const std::pair<string, string> & sup_pair,
                         const Diagram & d) -> CombinedLine
{
    auto find_part = [](const ParamLine & l, const string & name) {
        for (std::size_t i = 0; i < l.parts.size(); ++i)
            if (l.parts[i].label == name)
                return i;
        throw Error("sup label " + name + " does not occur in line " + to_string(l));
    };
    auto a = find_part(l1, sup_pair.first), b = find_part(l2, sup_pair.second);
    CombinedLine out;
    out.line.id = "C";
    auto sup = d.sup(label_id(d, sup_pair.first), label_id(d, sup_pair.second));
    out.line.parts.push_back({d.name(sup), 1});
    auto s = l1.parts.size(), t = l2.parts.size();
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < t; ++j) {
            auto inf = d.inf(label_id(d, l1.parts[i].label), label_id(d, l2.parts[j].label));
            out.x_vars.push_back(x_name(i, j));
            out.line.parts.push_back({d.name(inf), LinExpr::var(x_name(i, j))});
        }
    for (auto & x : out.x_vars)
        out.constraints.push_back(ge(LinExpr::var(x), 0, "A3 nonneg"));
    for (std::size_t i = 0; i < s; ++i) {
        LinExpr sum;
        for (std::size_t j = 0; j < t; ++j)
            sum += LinExpr::var(x_name(i, j));
        out.constraints.push_back(eq(sum, l1.parts[i].exp - (i == a ? 1 : 0), "A3 row " + std::to_string(i + 1)));
    }
    for (std::size_t j = 0; j < t; ++j) {
        LinExpr sum;
        for (std::size_t i = 0; i < s; ++i)
            sum += LinExpr::var(x_name(i, j));
        out.constraints.push_back(eq(sum, l2.parts[j].exp - (j == b ? 1 : 0), "A3 column " + std::to_string(j + 1)));
    }
    return out;
}

auto build_systems(const PsiEntry & entry, const vector<Inequality> & global, const LineCatalog & lines,
                   const Diagram & d) -> Systems
{
    auto get = [&](const string & id) -> const ParamLine & {
        auto it = lines.find(id);
        if (it == lines.end())
            throw Error("unknown line id " + id);
        return it->second;
    };
    vector<string> vars{"Delta", "d"};
    auto source = [&](const string & id, const string & fresh) {
        auto l = get(id);
        if (l.free_var) {
            l = l.rename(*l.free_var, fresh);
            vars.push_back(fresh);
        }
        return l;
    };
    auto l1 = source(entry.l1, "f1");
    auto l2 = source(entry.l2, "f2");

    Systems out;
    out.combined = build_combined_line(l1, l2, entry.sup, d);
    for (auto & q : global)
        out.base.push_back(tagged(q, q.tag.empty() ? "A1" : q.tag));
    for (auto & q : l1.side)
        out.base.push_back(tagged(q, "A2 L1"));
    for (auto & q : l2.side)
        out.base.push_back(tagged(q, "A2 L2"));
    out.base.insert(out.base.end(), out.combined.constraints.begin(), out.combined.constraints.end());

    vector<string> ks;
    for (std::size_t i = 0; i < entry.targets.size(); ++i) {
        auto & tg = entry.targets[i];
        auto t = get(tg.line);
        auto k = "k" + std::to_string(i + 1);
        auto ti = "T" + std::to_string(i + 1);
        if (t.free_var) {
            if (! tg.expr)
                throw Error("target " + tg.line + " has a free variable but no expression");
            t = t.rename(*t.free_var, k);
            ks.push_back(k);
            out.base.push_back(eq(LinExpr::var(k), *tg.expr, "A4 " + ti));
        }
        else if (tg.expr)
            throw Error("target " + tg.line + " has no free variable but an expression was given");
        vector<Inequality> p;
        for (auto & q : t.side) {
            if (q.rel == Rel::eq) {
                p.push_back(le(q.lhs, q.rhs, ti + " side"));
                p.push_back(ge(q.lhs, q.rhs, ti + " side"));
            }
            else if (! q.trivially_true())
                p.push_back(tagged(q, ti + " side"));
        }
        for (auto & q : hall_inequalities(out.combined.line, t, d))
            p.push_back(tagged(q, ti + " " + q.tag));
        out.p.push_back(std::move(p));
    }
    vars.insert(vars.end(), ks.begin(), ks.end());
    vars.insert(vars.end(), out.combined.x_vars.begin(), out.combined.x_vars.end());

    if (out.p.empty())
        return out;
    auto total = product_size(out.p);
    for (std::size_t idx = 0; idx < total; ++idx) {
        IneqSystem s;
        s.variables = vars;
        s.inequalities = out.base;
        auto rest = idx;
        vector<Inequality> chosen(out.p.size());
        for (std::size_t i = out.p.size(); i-- > 0;) {
            chosen[i] = out.p[i][rest % out.p[i].size()].negated();
            rest /= out.p[i].size();
        }
        s.inequalities.insert(s.inequalities.end(), chosen.begin(), chosen.end());
        s.check_declared();
        out.systems.push_back(std::move(s));
    }
    return out;
}

auto verify_entry(const PsiEntry & entry, const vector<Inequality> & global, const LineCatalog & lines,
                  const Diagram & d, const FmOptions & opts) -> EntryReport
{
    EntryReport r;
    r.name = entry.name;
    r.built = build_systems(entry, global, lines, d);
    for (std::size_t i = 0; i < r.built.systems.size(); ++i) {
        r.results.push_back(infeasible_over_reals(r.built.systems[i], opts));
        if (! r.results.back().infeasible && ! r.first_feasible)
            r.first_feasible = i;
    }
    r.valid = ! r.first_feasible;
    return r;
}

auto ledger_from_json(const nlohmann::json & j) -> PsiLedger
{
    PsiLedger l;
    l.problem = j.at("problem").get<string>();
    if (l.problem != "def3col-fp")
        throw Error("no parametric line catalog for problem " + l.problem);
    l.lines = def3col_lines();
    l.assumptions = def3col_assumptions();
    l.diagram = def3col_diagram();
    if (j.contains("assumptions")) {
        l.assumptions.clear();
        for (auto & q : j.at("assumptions"))
            l.assumptions.push_back(inequality_from_json(q));
    }
    if (j.contains("lines"))
        for (auto & [id, lj] : j.at("lines").items()) {
            auto line = param_line_from_json(lj);
            line.id = id;
            l.lines[id] = std::move(line);
        }
    for (auto & e : j.at("entries")) {
        PsiEntry p;
        p.name = e.value("name", "");
        p.l1 = e.at("l1").get<string>();
        p.l2 = e.at("l2").get<string>();
        auto sup = e.at("sup");
        if (! sup.is_array() || sup.size() != 2)
            throw Error("sup must list two labels");
        p.sup = {sup[0].get<string>(), sup[1].get<string>()};
        for (auto & t : e.at("targets")) {
            Target tg;
            tg.line = t.at("line").get<string>();
            if (t.contains("expr"))
                tg.expr = linexpr_from_json(t.at("expr"));
            p.targets.push_back(std::move(tg));
        }
        l.entries.push_back(std::move(p));
    }
    return l;
}

auto entry_to_json(const PsiEntry & e) -> nlohmann::json
{
    auto targets = nlohmann::json::array();
    for (auto & t : e.targets) {
        nlohmann::json tj{{"line", t.line}};
        if (t.expr)
            tj["expr"] = linexpr_to_json(*t.expr);
        targets.push_back(tj);
    }
    return {{"name", e.name}, {"l1", e.l1}, {"l2", e.l2}, {"sup", {e.sup.first, e.sup.second}}, {"targets", targets}};
}

auto report_to_json(const EntryReport & r) -> nlohmann::json
{
    auto sizes = nlohmann::json::array();
    for (auto & p : r.built.p)
        sizes.push_back(p.size());
    auto systems = nlohmann::json::array();
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        auto sj = fm_result_to_json(r.built.systems[i], r.results[i]);
        sj["index"] = i;
        systems.push_back(sj);
    }
    nlohmann::json j{{"name", r.name},
                     {"verdict", r.valid ? "valid" : "unverified"},
                     {"combined_line", to_string(r.built.combined.line)},
                     {"p_sizes", sizes},
                     {"system_count", r.results.size()},
                     {"systems", systems}};
    if (r.first_feasible)
        j["first_feasible"] = *r.first_feasible;
    return j;
}

auto format_report(const EntryReport & r) -> string
{
    std::ostringstream os;
    os << "entry " << (r.name.empty() ? "(unnamed)" : r.name) << ": " << (r.valid ? "valid" : "unverified") << "\n";
    os << "  C = " << to_string(r.built.combined.line) << "\n";
    os << "  |P| =";
    for (auto & p : r.built.p)
        os << " " << p.size();
    os << ", " << r.results.size() << " systems\n";
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        auto & res = r.results[i];
        auto & s = r.built.systems[i];
        os << "  system " << i << ": ";
        if (res.infeasible) {
            std::size_t used = 0;
            for (auto & m : res.certificate)
                used += m != 0;
            os << "infeasible (certificate combines " << used << " inequalities into 0 >= " << to_string(res.contradiction)
               << ")\n";
        }
        else {
            os << "feasible at";
            for (auto & v : s.variables)
                os << " " << v << "=" << to_string(res.witness.at(v));
            os << "\n";
        }
    }
    return os.str();
}

}
