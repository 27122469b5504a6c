#include <refp/problem.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>
#include <utility>

using std::map;
using std::optional;
using std::pair;
using std::string;
using std::vector;

namespace refp {

auto Configuration::degree() const -> std::uint32_t
{
    std::uint32_t d = 0;
    for (auto & p : parts)
        d += p.mult;
    return d;
}

auto Configuration::is_concrete() const -> bool
{
    return std::all_of(parts.begin(), parts.end(), [](const Part & p) { return p.set.size() == 1; });
}

auto Configuration::labels() const -> LabelSet
{
    LabelSet s;
    for (auto & p : parts)
        s |= p.set;
    return s;
}

void Configuration::canonicalize()
{
    std::sort(parts.begin(), parts.end(), [](const Part & a, const Part & b) { return a.set < b.set; });
    vector<Part> merged;
    for (auto & p : parts) {
        if (p.mult == 0)
            continue;
        if (! merged.empty() && merged.back().set == p.set)
            merged.back().mult += p.mult;
        else
            merged.push_back(p);
    }
    parts = std::move(merged);
}

auto to_configuration(const Concrete & c) -> Configuration
{
    Configuration out;
    for (auto id : c) {
        if (! out.parts.empty() && out.parts.back().set.first() == id)
            ++out.parts.back().mult;
        else
            out.parts.push_back({LabelSet::singleton(id), 1});
    }
    out.canonicalize();
    return out;
}

void Constraint::canonicalize()
{
    for (auto & l : lines)
        l.canonicalize();
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
}

auto Constraint::labels() const -> LabelSet
{
    LabelSet s;
    for (auto & l : lines)
        s |= l.labels();
    return s;
}

auto Problem::find_label(const string & name) const -> optional<LabelId>
{
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == name)
            return static_cast<LabelId>(i);
    return std::nullopt;
}

void Problem::validate() const
{
    auto check = [&](const Constraint & c, const char * what) {
        for (auto & l : c.lines) {
            if (l.degree() != c.arity)
                throw Error(string(what) + " line has degree " + std::to_string(l.degree()) + ", expected " + std::to_string(c.arity));
            for (auto & p : l.parts) {
                if (p.set.empty())
                    throw Error(string(what) + " line has an empty part");
                for (auto id : p.set.members())
                    if (id >= alphabet.size())
                        throw Error(string(what) + " line refers to unknown label id " + std::to_string(id));
            }
        }
    };
    check(node, "node");
    check(edge, "edge");
}

void Problem::canonicalize()
{
    node.canonicalize();
    edge.canonicalize();
}

auto is_valid_label_name(const string & name) -> bool
{
    if (name.empty())
        return false;
    for (char ch : name)
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '[' || ch == ']' || ch == '^' || ch == '#')
            return false;
    return true;
}

namespace {

    struct RawItem {
        vector<string> names;
        std::uint32_t mult;
    };

    struct RawLine {
        vector<RawItem> items;
        int line_no;
    };

    auto is_space(char c) -> bool { return c == ' ' || c == '\t' || c == '\r'; }

    auto read_token(const string & s, std::size_t & i) -> string
    {
        std::size_t start = i;
        while (i < s.size() && ! is_space(s[i]) && s[i] != '[' && s[i] != ']' && s[i] != '^')
            ++i;
        return s.substr(start, i - start);
    }

    auto parse_line(const string & s, int line_no) -> RawLine
    {
        RawLine out{{}, line_no};
        std::size_t i = 0;
        auto col = [&] { return static_cast<int>(i) + 1; };
        while (true) {
            while (i < s.size() && is_space(s[i]))
                ++i;
            if (i >= s.size())
                break;
            RawItem item{{}, 1};
            if (s[i] == '[') {
                ++i;
                while (true) {
                    while (i < s.size() && is_space(s[i]))
                        ++i;
                    if (i >= s.size())
                        throw ParseError("unterminated '['", line_no, col());
                    if (s[i] == '[')
                        throw ParseError("nested '[' is not allowed", line_no, col());
                    if (s[i] == '^')
                        throw ParseError("unexpected '^' inside group", line_no, col());
                    if (s[i] == ']') {
                        ++i;
                        break;
                    }
                    item.names.push_back(read_token(s, i));
                }
                if (item.names.empty())
                    throw ParseError("empty group", line_no, col());
            }
            else if (s[i] == ']' || s[i] == '^') {
                throw ParseError(string("unexpected '") + s[i] + "'", line_no, col());
            }
            else {
                item.names.push_back(read_token(s, i));
            }
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t start = i;
                while (i < s.size() && s[i] >= '0' && s[i] <= '9')
                    ++i;
                if (start == i)
                    throw ParseError("expected exponent after '^'", line_no, col());
                unsigned long v = 0;
                try {
                    v = std::stoul(s.substr(start, i - start));
                }
                catch (const std::exception &) {
                    throw ParseError("exponent out of range", line_no, static_cast<int>(start) + 1);
                }
                if (v == 0 || v > 1'000'000)
                    throw ParseError("exponent must be a positive integer", line_no, static_cast<int>(start) + 1);
                item.mult = static_cast<std::uint32_t>(v);
            }
            if (i < s.size() && ! is_space(s[i]) && s[i] != '[')
                throw ParseError(string("unexpected '") + s[i] + "'", line_no, col());
            out.items.push_back(std::move(item));
        }
        return out;
    }

}

auto parse_problem(const string & text) -> Problem
{
    vector<vector<RawLine>> sections(1);
    std::istringstream in(text);
    string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first != string::npos && line[first] == '#')
            continue;
        if (first == string::npos) {
            if (! sections.back().empty())
                sections.emplace_back();
            continue;
        }
        sections.back().push_back(parse_line(line, line_no));
    }
    if (sections.back().empty())
        sections.pop_back();
    if (sections.empty())
        throw ParseError("empty node constraint section", line_no + 1, 1);
    if (sections.size() == 1)
        throw ParseError("empty edge constraint section", line_no + 1, 1);
    if (sections.size() > 2)
        throw ParseError("more than two constraint sections", sections[2].front().line_no, 1);

    vector<string> names;
    for (auto & sec : sections)
        for (auto & l : sec)
            for (auto & it : l.items)
                for (auto & n : it.names)
                    names.push_back(n);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    map<string, LabelId> ids;
    for (std::size_t i = 0; i < names.size(); ++i)
        ids[names[i]] = static_cast<LabelId>(i);

    Problem p;
    p.alphabet = names;
    for (int s = 0; s < 2; ++s) {
        Constraint & c = s == 0 ? p.node : p.edge;
        bool first_line = true;
        for (auto & rl : sections[s]) {
            Configuration conf;
            for (auto & it : rl.items) {
                LabelSet set;
                for (auto & n : it.names)
                    set.insert(ids.at(n));
                conf.parts.push_back({set, it.mult});
            }
            conf.canonicalize();
            if (first_line) {
                c.arity = conf.degree();
                first_line = false;
            }
            else if (conf.degree() != c.arity)
                throw ParseError("inconsistent arity: expected " + std::to_string(c.arity) + ", got " + std::to_string(conf.degree()), rl.line_no, 1);
            c.lines.push_back(std::move(conf));
        }
    }
    p.canonicalize();
    return p;
}

auto format_configuration(const Configuration & c, const vector<string> & names) -> string
{
    string out;
    for (auto & p : c.parts) {
        string tok;
        if (p.set.size() == 1)
            tok = names.at(p.set.first());
        else {
            tok = "[";
            bool first = true;
            for (auto id : p.set.members()) {
                if (! first)
                    tok += ' ';
                tok += names.at(id);
                first = false;
            }
            tok += "]";
        }
        if (p.mult <= 3) {
            for (std::uint32_t k = 0; k < p.mult; ++k) {
                if (! out.empty())
                    out += ' ';
                out += tok;
            }
        }
        else {
            if (! out.empty())
                out += ' ';
            out += tok + "^" + std::to_string(p.mult);
        }
    }
    return out;
}

auto format_constraint(const Constraint & c, const vector<string> & names) -> string
{
    string out;
    for (auto & l : c.lines)
        out += format_configuration(l, names) + "\n";
    return out;
}

auto serialize_problem(const Problem & p) -> string
{
    return format_constraint(p.node, p.alphabet) + "\n" + format_constraint(p.edge, p.alphabet);
}

namespace {

    // Every multiset of size m over the given members, appended to prefix.
    void multisets(const vector<LabelId> & members, std::uint32_t m, std::size_t from, Concrete & prefix, vector<Concrete> & out)
    {
        if (m == 0) {
            out.push_back(prefix);
            return;
        }
        for (std::size_t i = from; i < members.size(); ++i) {
            prefix.push_back(members[i]);
            multisets(members, m - 1, i, prefix, out);
            prefix.pop_back();
        }
    }

}

auto expand(const Configuration & c) -> vector<Concrete>
{
    vector<Concrete> acc{Concrete{}};
    for (auto & p : c.parts) {
        vector<Concrete> choices;
        Concrete prefix;
        multisets(p.set.members(), p.mult, 0, prefix, choices);
        vector<Concrete> next;
        next.reserve(acc.size() * choices.size());
        for (auto & a : acc)
            for (auto & ch : choices) {
                Concrete x = a;
                x.insert(x.end(), ch.begin(), ch.end());
                next.push_back(std::move(x));
            }
        acc = std::move(next);
    }
    for (auto & a : acc)
        std::sort(a.begin(), a.end());
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return acc;
}

auto expansion(const Constraint & c) -> vector<Concrete>
{
    vector<Concrete> all;
    for (auto & l : c.lines) {
        auto e = expand(l);
        all.insert(all.end(), std::make_move_iterator(e.begin()), std::make_move_iterator(e.end()));
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

auto constraints_equal(const Constraint & a, const Constraint & b) -> bool
{
    return a.arity == b.arity && expansion(a) == expansion(b);
}

namespace {

    struct RLine {
        int side;
        vector<pair<LabelId, std::uint32_t>> entries;
    };

    struct Hyper {
        std::size_t n = 0;
        vector<RLine> lines;
        // per label: (line index, multiplicity)
        vector<vector<pair<std::size_t, std::uint32_t>>> incidence;
        vector<Concrete> node_exp, edge_exp;
    };

    auto build_hyper(const Problem & p) -> Hyper
    {
        Hyper h;
        h.n = p.alphabet.size();
        h.node_exp = expansion(p.node);
        h.edge_exp = expansion(p.edge);
        h.incidence.resize(h.n);
        for (int side = 0; side < 2; ++side)
            for (auto & c : side == 0 ? h.node_exp : h.edge_exp) {
                RLine l{side, {}};
                for (auto id : c) {
                    if (! l.entries.empty() && l.entries.back().first == id)
                        ++l.entries.back().second;
                    else
                        l.entries.emplace_back(id, 1);
                }
                for (auto & [id, m] : l.entries)
                    h.incidence[id].emplace_back(h.lines.size(), m);
                h.lines.push_back(std::move(l));
            }
        return h;
    }

    using Colors = vector<int>;

    template <typename Sig>
    auto histogram_matches(const vector<Sig> & a, const vector<Sig> & b) -> bool
    {
        auto x = a, y = b;
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        return x == y;
    }

    auto count_classes(const Colors & c) -> std::size_t
    {
        auto x = c;
        std::sort(x.begin(), x.end());
        return static_cast<std::size_t>(std::unique(x.begin(), x.end()) - x.begin());
    }

    // Joint colour refinement; false when the two colourings become distinguishable.
    auto refine(const Hyper & h1, const Hyper & h2, Colors & c1, Colors & c2) -> bool
    {
        std::size_t classes = count_classes(c1);
        while (true) {
            using LineSig = pair<int, vector<pair<int, std::uint32_t>>>;
            auto line_sigs = [](const Hyper & h, const Colors & c) {
                vector<LineSig> sigs;
                sigs.reserve(h.lines.size());
                for (auto & l : h.lines) {
                    LineSig s{l.side, {}};
                    for (auto & [id, m] : l.entries)
                        s.second.emplace_back(c[id], m);
                    std::sort(s.second.begin(), s.second.end());
                    sigs.push_back(std::move(s));
                }
                return sigs;
            };
            auto s1 = line_sigs(h1, c1), s2 = line_sigs(h2, c2);
            if (! histogram_matches(s1, s2))
                return false;
            map<LineSig, int> line_palette;
            for (auto & s : s1)
                line_palette.emplace(s, 0);
            int next = 0;
            for (auto & [k, v] : line_palette)
                v = next++;

            using LabelSig = pair<int, vector<pair<int, std::uint32_t>>>;
            auto label_sigs = [&](const Hyper & h, const Colors & c, const vector<LineSig> & ls) {
                vector<LabelSig> sigs(h.n);
                for (std::size_t v = 0; v < h.n; ++v) {
                    sigs[v].first = c[v];
                    for (auto & [li, m] : h.incidence[v])
                        sigs[v].second.emplace_back(line_palette.at(ls[li]), m);
                    std::sort(sigs[v].second.begin(), sigs[v].second.end());
                }
                return sigs;
            };
            auto t1 = label_sigs(h1, c1, s1), t2 = label_sigs(h2, c2, s2);
            if (! histogram_matches(t1, t2))
                return false;
            map<LabelSig, int> palette;
            for (auto & s : t1)
                palette.emplace(s, 0);
            next = 0;
            for (auto & [k, v] : palette)
                v = next++;
            for (std::size_t v = 0; v < h1.n; ++v) {
                c1[v] = palette.at(t1[v]);
                c2[v] = palette.at(t2[v]);
            }
            std::size_t now = count_classes(c1);
            if (now == classes)
                return true;
            classes = now;
        }
    }

    auto apply_map(const vector<Concrete> & lines, const vector<LabelId> & f) -> vector<Concrete>
    {
        vector<Concrete> out;
        out.reserve(lines.size());
        for (auto & l : lines) {
            Concrete m;
            for (auto id : l)
                m.push_back(f[id]);
            std::sort(m.begin(), m.end());
            out.push_back(std::move(m));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    struct Search {
        const Hyper & h1;
        const Hyper & h2;
        std::uint64_t budget;
        std::uint64_t steps = 0;
        bool exhausted = false;

        auto run(Colors c1, Colors c2) -> optional<vector<LabelId>>
        {
            if (++steps > budget) {
                exhausted = true;
                return std::nullopt;
            }
            if (! refine(h1, h2, c1, c2))
                return std::nullopt;

            map<int, vector<LabelId>> cls1, cls2;
            for (std::size_t v = 0; v < h1.n; ++v) {
                cls1[c1[v]].push_back(static_cast<LabelId>(v));
                cls2[c2[v]].push_back(static_cast<LabelId>(v));
            }
            int pick = -1;
            std::size_t best = 0;
            for (auto & [col, members] : cls1)
                if (members.size() > 1 && (pick == -1 || members.size() < best)) {
                    pick = col;
                    best = members.size();
                }
            if (pick == -1) {
                vector<LabelId> f(h1.n);
                for (auto & [col, members] : cls1)
                    f[members[0]] = cls2.at(col)[0];
                if (apply_map(h1.node_exp, f) == h2.node_exp && apply_map(h1.edge_exp, f) == h2.edge_exp)
                    return f;
                return std::nullopt;
            }
            int fresh = static_cast<int>(h1.n) + 1;
            for (auto & [col, members] : cls1)
                fresh = std::max(fresh, col + 1);
            LabelId v = cls1[pick][0];
            for (LabelId w : cls2[pick]) {
                Colors d1 = c1, d2 = c2;
                d1[v] = fresh;
                d2[w] = fresh;
                if (auto r = run(std::move(d1), std::move(d2)))
                    return r;
                if (exhausted)
                    return std::nullopt;
            }
            return std::nullopt;
        }
    };

}

auto equal_up_to_renaming(const Problem & p1, const Problem & p2, std::uint64_t budget) -> RenamingResult
{
    RenamingResult res;
    if (p1.alphabet.size() != p2.alphabet.size() || p1.node.arity != p2.node.arity || p1.edge.arity != p2.edge.arity)
        return res;
    auto h1 = build_hyper(p1), h2 = build_hyper(p2);
    if (h1.node_exp.size() != h2.node_exp.size() || h1.edge_exp.size() != h2.edge_exp.size())
        return res;
    Search s{h1, h2, budget};
    auto f = s.run(Colors(h1.n, 0), Colors(h2.n, 0));
    res.steps = s.steps;
    if (f) {
        res.status = RenamingStatus::found;
        res.mapping = *f;
    }
    else if (s.exhausted)
        res.status = RenamingStatus::undecided;
    return res;
}

auto zero_round_solvable(const Problem & p) -> optional<Configuration>
{
    auto edges = expansion(p.edge);
    for (auto & line : expansion(p.node)) {
        Concrete distinct = line;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        vector<Concrete> choices;
        Concrete prefix;
        multisets(distinct, p.edge.arity, 0, prefix, choices);
        bool ok = std::all_of(choices.begin(), choices.end(),
            [&](const Concrete & c) { return std::binary_search(edges.begin(), edges.end(), c); });
        if (ok)
            return to_configuration(line);
    }
    return std::nullopt;
}

auto relabel(const Configuration & c, const vector<LabelId> & new_ids) -> Configuration
{
    Configuration out;
    for (auto & p : c.parts) {
        LabelSet s;
        for (auto id : p.set.members())
            s.insert(new_ids.at(id));
        out.parts.push_back({s, p.mult});
    }
    out.canonicalize();
    return out;
}

auto relabel(const Constraint & c, const vector<LabelId> & new_ids) -> Constraint
{
    Constraint out{c.arity, {}};
    for (auto & l : c.lines)
        out.lines.push_back(relabel(l, new_ids));
    out.canonicalize();
    return out;
}

auto remove_unused_labels(const Problem & p) -> Problem
{
    auto used = p.node.labels() | p.edge.labels();
    vector<LabelId> new_ids(p.alphabet.size(), 0);
    Problem out;
    for (std::size_t i = 0; i < p.alphabet.size(); ++i)
        if (used.contains(static_cast<LabelId>(i))) {
            new_ids[i] = static_cast<LabelId>(out.alphabet.size());
            out.alphabet.push_back(p.alphabet[i]);
        }
    out.node = relabel(p.node, new_ids);
    out.edge = relabel(p.edge, new_ids);
    return out;
}

auto sort_alphabet(const Problem & p) -> Problem
{
    vector<LabelId> order(p.alphabet.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<LabelId>(i);
    std::sort(order.begin(), order.end(), [&](LabelId a, LabelId b) { return p.alphabet[a] < p.alphabet[b]; });
    vector<LabelId> new_ids(order.size());
    Problem out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        new_ids[order[i]] = static_cast<LabelId>(i);
        out.alphabet.push_back(p.alphabet[order[i]]);
    }
    out.node = relabel(p.node, new_ids);
    out.edge = relabel(p.edge, new_ids);
    return out;
}

}
