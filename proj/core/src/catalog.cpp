#include <refp/catalog.hpp>
#include <refp/fixedpoint.hpp>

#include <algorithm>
#include <map>

using std::string;
using std::vector;

namespace refp::catalog {

namespace {

    struct Term {
        string label;  // one name, or several separated by spaces for a set
        std::int64_t exp;
    };

    // Builds problem text line by line; zero exponents are dropped.
    class Text {
      public:
        void line(const vector<Term> & terms, bool allow_negative = false)
        {
            string out;
            for (auto & t : terms) {
                if (t.exp < 0) {
                    if (allow_negative)
                        return;
                    throw Error("catalog: negative exponent for '" + t.label + "'");
                }
                if (t.exp == 0)
                    continue;
                auto tok = t.label.find(' ') == string::npos ? t.label : "[" + t.label + "]";
                out += (out.empty() ? "" : " ") + tok;
                if (t.exp > 1)
                    out += "^" + std::to_string(t.exp);
            }
            text_ += out + "\n";
        }

        void next_section() { text_ += "\n"; }
        auto str() const -> const string & { return text_; }

      private:
        string text_;
    };

    auto join(const vector<string> & names) -> string
    {
        string out;
        for (auto & n : names)
            out += (out.empty() ? "" : " ") + n;
        return out;
    }

    const vector<string> def2col_labels{"_", "X", "Y", "XY", "XY+", "AX", "BY", "AXY+", "BXY+", "ABXY+"};

    const vector<vector<vector<string>>> def2col_edges{
        {{"BY", "Y", "_"}, {"AX", "X", "_"}},
        {{"ABXY+", "AXY+", "BXY+", "AX", "BY", "XY+", "XY", "X", "Y", "_"}, {"_"}},
        {{"AXY+", "AX", "XY+", "XY", "X", "Y", "_"}, {"Y", "_"}},
        {{"BXY+", "BY", "XY+", "XY", "X", "Y", "_"}, {"X", "_"}},
        {{"XY+", "XY", "X", "Y", "_"}, {"XY", "X", "Y", "_"}},
    };

    // L u {C}, spelled with letters in A B C X Y + order
    auto with_c(const string & name) -> string
    {
        if (name == "_")
            return "C";
        string out;
        bool placed = false;
        for (char ch : name) {
            if (! placed && (ch == 'X' || ch == 'Y' || ch == '+')) {
                out += 'C';
                placed = true;
            }
            out += ch;
        }
        if (! placed)
            out += 'C';
        return out;
    }

    auto with_c(const vector<string> & names) -> vector<string>
    {
        vector<string> out;
        for (auto & n : names)
            out.push_back(with_c(n));
        return out;
    }

    auto subset_name(std::uint32_t mask, std::uint32_t colors) -> string
    {
        if (mask == 0)
            return "_";
        string out;
        for (std::uint32_t c = 0; c < colors; ++c)
            if (mask >> c & 1)
                out += std::to_string(c + 1);
        return out;
    }

    auto sinkless_orientation(const Key & k) -> string
    {
        Text t;
        t.line({{"O", 1}, {"I O", k.delta - 1}});
        t.next_section();
        t.line({{"I", 1}, {"O", 1}});
        return t.str();
    }

    auto c_coloring(const Key & k) -> string
    {
        Text t;
        for (std::uint32_t c = 1; c <= k.colors; ++c)
            t.line({{std::to_string(c), k.delta}});
        t.next_section();
        for (std::uint32_t a = 1; a <= k.colors; ++a)
            for (std::uint32_t b = a + 1; b <= k.colors; ++b)
                t.line({{std::to_string(a), 1}, {std::to_string(b), 1}});
        return t.str();
    }

    auto delta_coloring(const Key & k) -> string
    {
        std::uint32_t n = k.delta;
        Text t;
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::int64_t size = __builtin_popcount(mask);
            t.line({{subset_name(mask, n), std::int64_t{n} - size + 1}, {"_", size - 1}});
        }
        t.next_section();
        // C1 [every subset of the complement]
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::uint32_t rest = ((1u << n) - 1) & ~mask;
            vector<string> compat;
            for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
                compat.push_back(subset_name(sub, n));
                if (sub == 0)
                    break;
            }
            t.line({{subset_name(mask, n), 1}, {join(compat), 1}});
        }
        return t.str();
    }

    void def2col_edge_lines(Text & t, bool add_c)
    {
        for (auto & e : def2col_edges) {
            t.line({{join(e[0]), 1}, {join(e[1]), 1}});
            if (add_c) {
                t.line({{join(e[0]), 1}, {join(with_c(e[1])), 1}});
                t.line({{join(with_c(e[0])), 1}, {join(e[1]), 1}});
            }
        }
    }

    auto def2col(const Key & k) -> string
    {
        std::int64_t D = k.delta;
        Text t;
        t.line({{"X", D - 2}, {"AX", 2}});
        t.line({{"Y", D - 2}, {"BY", 2}});
        t.line({{"X", D - 1}, {"AXY+", 1}});
        t.line({{"Y", D - 1}, {"BXY+", 1}});
        t.line({{"_", 1}, {"XY", D - 3}, {"AXY+", 1}, {"BXY+", 1}});
        t.line({{"_", 1}, {"XY", D - 2}, {"ABXY+", 1}});
        t.line({{"XY", D - 1}, {"XY+", 1}});
        t.next_section();
        def2col_edge_lines(t, false);
        return t.str();
    }

    auto def3col(const Key & k) -> string
    {
        std::int64_t D = k.delta, d = k.defect();
        bool gt = D > 3 * d + 2, le = ! gt, eq = D == 2 * d + 4;
        Text t;
        // colour A / colour B
        for (auto [x, ax, cx, acx] : {std::tuple{"X", "AX", "CX", "ACX"}, std::tuple{"Y", "BY", "CY", "BCY"}}) {
            t.line({{"_", d + 1}, {cx, d}, {acx, D - 2 * d - 1}});
            t.line({{x, 2 * d + 1}, {acx, D - 2 * d - 1}});
            t.line({{x, d}, {ax, D - d}});
        }
        for (auto [x, cx, acxy, axy] : {std::tuple{"X", "CX", "ACXY+", "AXY+"}, std::tuple{"Y", "CY", "BCXY+", "BXY+"}}) {
            if (gt) {
                t.line({{"_", d + 1}, {cx, d + 1}, {acxy, d}, {"ABCXY+", D - 3 * d - 2}});
                t.line({{x, 2 * d + 2}, {acxy, d}, {"ABCXY+", D - 3 * d - 2}});
                t.line({{x, d + 1}, {axy, 2 * d + 1}, {"ABCXY+", D - 3 * d - 2}});
            }
            if (le) {
                t.line({{"_", d + 1}, {cx, d + 1}, {acxy, D - 2 * d - 2}});
                t.line({{x, 2 * d + 2}, {acxy, D - 2 * d - 2}});
                t.line({{x, d + 1}, {axy, D - d - 1}});
            }
            t.line({{x, d + 1}, {axy, d}, {"ABXY+", D - 2 * d - 1}});
        }
        // j >= 0 and no exponent negative
        for (std::int64_t j = 0; j <= d + 1; ++j) {
            t.line({{"_", d + 2}, {"CXY", j}, {"ACXY+", d - j}, {"BCXY+", d - j}, {"ABCXY+", D - 3 * d - 2 + j}}, true);
            t.line({{"_", 1}, {"XY", d + 1 + j}, {"ACXY+", d - j}, {"BCXY+", d - j}, {"ABCXY+", D - 3 * d - 2 + j}}, true);
            t.line({{"_", 1}, {"XY", j}, {"AXY+", 2 * d + 1 - j}, {"BCXY+", d - j}, {"ABCXY+", D - 3 * d - 2 + j}}, true);
            t.line({{"_", 1}, {"XY", j}, {"ACXY+", d - j}, {"BXY+", 2 * d + 1 - j}, {"ABCXY+", D - 3 * d - 2 + j}}, true);
            t.line({{"_", 1}, {"XY", j}, {"AXY+", d - j}, {"BXY+", d - j}, {"ABXY+", D - 2 * d - 1 + j}}, true);
        }
        // both regimes are emitted when they overlap
        if (eq) {
            t.line({{"_", d + 1}, {"CXY", d + 1}, {"CXY+", 1}, {"ABCXY+", 1}});
            t.line({{"XY", 2 * d + 2}, {"CXY+", 1}, {"ABCXY+", 1}});
            t.line({{"XY", d + 1}, {"XY+", d + 2}, {"ABCXY+", 1}});
        }
        if (le) {
            t.line({{"_", d + 1}, {"CXY", 3 * d + 4 - D}, {"CXY+", 2 * D - 4 * d - 5}});
            t.line({{"XY", 4 * d + 5 - D}, {"CXY+", 2 * D - 4 * d - 5}});
            t.line({{"XY", 3 * d + 4 - D}, {"XY+", 2 * D - 3 * d - 4}});
        }
        for (std::int64_t j = 2; j <= d + 1; ++j)
            t.line({{"XY", j}, {"XY+", 2 * d + 3 - 2 * j}, {"ABXY+", D + j - 2 * d - 3}});
        t.line({{"_", d}, {"C", D - d}});
        t.next_section();
        def2col_edge_lines(t, true);
        return t.str();
    }

    auto family_labels(const Key & k) -> vector<string>
    {
        switch (k.family) {
            case Family::delta_coloring_fp: {
                vector<string> out;
                for (std::uint32_t mask = 0; mask < (1u << k.delta); ++mask)
                    out.push_back(subset_name(mask, k.delta));
                return out;
            }
            case Family::def2col_fp:
                return def2col_labels;
            case Family::def3col_fp: {
                auto out = def2col_labels;
                for (auto & l : def2col_labels)
                    out.push_back(with_c(l));
                return out;
            }
            default:
                throw Error("catalog: " + to_string(k.family) + " has no diagram");
        }
    }

}

auto to_string(Family f) -> string
{
    switch (f) {
        case Family::sinkless_orientation:
            return "sinkless-orientation";
        case Family::c_coloring:
            return "c-coloring";
        case Family::delta_coloring_fp:
            return "delta-coloring-fp";
        case Family::def2col_fp:
            return "def2col-fp";
        case Family::def3col_fp:
            return "def3col-fp";
    }
    return "?";
}

auto families() -> vector<Family>
{
    return {Family::sinkless_orientation, Family::c_coloring, Family::delta_coloring_fp, Family::def2col_fp, Family::def3col_fp};
}

auto parse_family(const string & s) -> Family
{
    for (auto f : families())
        if (to_string(f) == s)
            return f;
    throw Error("unknown catalog family '" + s + "'");
}

auto to_string(const Key & k) -> string
{
    auto out = to_string(k.family) + " --delta " + std::to_string(k.delta);
    if (k.family == Family::c_coloring)
        out += " --colors " + std::to_string(k.colors);
    return out;
}

void check_range(const Key & k)
{
    auto need = [&](bool ok, const string & what) {
        if (! ok)
            throw Error(to_string(k.family) + ": " + what);
    };
    switch (k.family) {
        case Family::sinkless_orientation:
            need(k.delta >= 2 && k.delta <= 64, "delta must be in [2, 64]");
            break;
        case Family::c_coloring:
            need(k.delta >= 1 && k.delta <= 64, "delta must be in [1, 64]");
            need(k.colors >= 2 && k.colors <= 9, "colors must be in [2, 9]");
            break;
        case Family::delta_coloring_fp:
            need(k.delta >= 2 && k.delta <= 9, "delta must be in [2, 9]");
            break;
        case Family::def2col_fp:
            need(k.delta >= 3 && k.delta <= 64, "delta must be in [3, 64]");
            break;
        case Family::def3col_fp:
            need(k.delta >= 5 && k.delta <= 64, "delta must be in [5, 64]");
            break;
    }
}

auto has_diagram(Family f) -> bool
{
    return f == Family::delta_coloring_fp || f == Family::def2col_fp || f == Family::def3col_fp;
}

auto generate_raw(const Key & k) -> Problem
{
    check_range(k);
    string text;
    switch (k.family) {
        case Family::sinkless_orientation:
            text = sinkless_orientation(k);
            break;
        case Family::c_coloring:
            text = c_coloring(k);
            break;
        case Family::delta_coloring_fp:
            text = delta_coloring(k);
            break;
        case Family::def2col_fp:
            text = def2col(k);
            break;
        case Family::def3col_fp:
            text = def3col(k);
            break;
    }
    return parse_problem(text);
}

auto generate(const Key & k) -> Problem
{
    auto p = generate_raw(k);
    if (! has_diagram(k.family))
        return p;
    auto d = generate_diagram(k);
    vector<LabelId> to_d;
    for (auto & n : p.alphabet)
        to_d.push_back(*d.find(n));
    vector<LabelId> from_d(d.size(), 0);
    for (LabelId i = 0; i < to_d.size(); ++i)
        from_d[to_d[i]] = i;
    auto node = relabel(p.node, to_d);
    Constraint kept{node.arity, {}};
    for (std::size_t i = 0; i < node.lines.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < node.lines.size() && ! dominated; ++j)
            dominated = i != j && d_dominates(node.lines[j], node.lines[i], d);
        if (! dominated)
            kept.lines.push_back(node.lines[i]);
    }
    kept = relabel(kept, from_d);
    p.node = std::move(kept);
    return p;
}

auto label_letters(const string & name) -> LabelSet
{
    LabelSet s;
    if (name == "_")
        return s;
    for (unsigned char ch : name)
        s.insert(ch);
    return s;
}

auto generate_diagram(const Key & k) -> Diagram
{
    check_range(k);
    auto names = family_labels(k);
    vector<LabelSet> sets;
    for (auto & n : names)
        sets.push_back(label_letters(n));
    return subset_diagram(sets, names);
}

auto fixtures() -> vector<Key>
{
    vector<Key> out;
    for (std::uint32_t D : {2u, 3u, 4u})
        out.push_back({Family::sinkless_orientation, D, 0});
    out.push_back({Family::c_coloring, 3, 3});
    out.push_back({Family::c_coloring, 3, 4});
    for (std::uint32_t D = 3; D <= 6; ++D)
        out.push_back({Family::delta_coloring_fp, D, 0});
    for (std::uint32_t D = 4; D <= 8; ++D)
        out.push_back({Family::def2col_fp, D, 0});
    for (std::uint32_t D = 5; D <= 8; ++D)
        out.push_back({Family::def3col_fp, D, 0});
    return out;
}

}
