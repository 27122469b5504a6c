#include <refp/fixedpoint.hpp>

#include "matching.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

using nlohmann::json;
using std::optional;
using std::pair;
using std::string;
using std::vector;

namespace refp {

namespace {

    const string sup_op = "⊔";
    const string inf_op = "⊓";

    // run-length concrete line, sorted by label id
    using DLine = vector<pair<LabelId, std::uint32_t>>;

    struct DLineHash {
        auto operator()(const DLine & l) const -> std::size_t
        {
            std::size_t h = l.size();
            for (auto & [id, m] : l)
                h = (h * 0x100000001b3ull) ^ (std::size_t{id} << 20 ^ m);
            return h;
        }
    };

    auto to_dline(const Configuration & c) -> DLine
    {
        DLine out;
        for (auto & p : c.parts) {
            if (p.set.size() != 1)
                throw Error("expected a configuration of single diagram labels");
            out.emplace_back(p.set.first(), p.mult);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    auto to_dline(const Concrete & c) -> DLine
    {
        DLine out;
        for (auto id : c) {
            if (! out.empty() && out.back().first == id)
                ++out.back().second;
            else
                out.emplace_back(id, 1);
        }
        return out;
    }

    auto to_concrete(const DLine & l) -> Concrete
    {
        Concrete out;
        for (auto & [id, m] : l)
            out.insert(out.end(), m, id);
        return out;
    }

    auto to_config(const DLine & l) -> Configuration
    {
        Configuration c;
        for (auto & [id, m] : l)
            c.parts.push_back({LabelSet::singleton(id), m});
        c.canonicalize();
        return c;
    }

    void normalize(DLine & l)
    {
        std::sort(l.begin(), l.end());
        DLine merged;
        for (auto & e : l) {
            if (! merged.empty() && merged.back().first == e.first)
                merged.back().second += e.second;
            else
                merged.push_back(e);
        }
        l = std::move(merged);
    }

    auto dline_dominates(const DLine & big, const DLine & small, const Diagram & d) -> bool
    {
        vector<std::uint32_t> demand, capacity;
        for (auto & e : small)
            demand.push_back(e.second);
        for (auto & e : big)
            capacity.push_back(e.second);
        return detail::saturating_flow(demand, capacity,
            [&](std::size_t i, std::size_t j) { return d.reaches(small[i].first, big[j].first); });
    }

    // longest path from a source; strictly increases along edges
    auto depths(const Diagram & d) -> vector<std::uint64_t>
    {
        vector<std::uint64_t> depth(d.size(), 0);
        vector<LabelId> order(d.size());
        for (LabelId i = 0; i < d.size(); ++i)
            order[i] = i;
        // fewer predecessors first is a topological order
        std::sort(order.begin(), order.end(), [&](LabelId a, LabelId b) { return d.pred(a).size() < d.pred(b).size(); });
        for (auto v : order)
            for (auto p : d.pred(v).members())
                if (p != v)
                    depth[v] = std::max(depth[v], depth[p] + 1);
        return depth;
    }

    struct Deriv {
        std::size_t left, right;
        vector<SlotOrigin> slots;
    };

    struct Engine {
        const Diagram & d;
        const FpOptions & opts;
        vector<std::uint64_t> depth;
        Provenance prov;

        auto weight(const DLine & l) const -> std::uint64_t
        {
            std::uint64_t w = 0;
            for (auto & [id, m] : l)
                w += depth[id] * m;
            return w;
        }

        auto maximal(vector<DLine> lines) const -> vector<DLine>
        {
            std::sort(lines.begin(), lines.end());
            lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
            vector<pair<std::uint64_t, DLine>> ws;
            ws.reserve(lines.size());
            for (auto & l : lines)
                ws.emplace_back(weight(l), std::move(l));
            std::stable_sort(ws.begin(), ws.end(), [](auto & a, auto & b) { return a.first > b.first; });
            vector<pair<std::uint64_t, DLine>> kept;
            for (auto & cand : ws) {
                bool dominated = false;
                for (auto & k : kept)
                    if (k.first > cand.first && dline_dominates(k.second, cand.second, d)) {
                        dominated = true;
                        break;
                    }
                if (! dominated)
                    kept.push_back(std::move(cand));
            }
            vector<DLine> out;
            for (auto & k : kept)
                out.push_back(std::move(k.second));
            std::sort(out.begin(), out.end());
            return out;
        }

        auto comparable_everywhere(const DLine & l) const -> bool
        {
            for (auto & a : l)
                for (auto & b : l)
                    if (! d.reaches(a.first, b.first) && ! d.reaches(b.first, a.first))
                        return false;
            return true;
        }

        template <typename Emit>
        void combine_pair(const DLine & L, const DLine & R, Emit && emit) const
        {
            std::size_t rows = L.size(), cols = R.size();
            if (opts.prune_selfcomb && L == R && comparable_everywhere(L))
                return;
            vector<LabelId> inf_table(rows * cols);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    inf_table[i * cols + j] = d.inf(L[i].first, R[j].first);
            vector<std::uint32_t> rowrem(rows), colrem(cols), x(rows * cols);

            for (std::size_t a = 0; a < rows; ++a)
                for (std::size_t b = 0; b < cols; ++b) {
                    LabelId la = L[a].first, lb = R[b].first;
                    LabelId s = d.sup(la, lb);
                    if (opts.prune_twocomb && (s == la || s == lb))
                        continue;
                    if (opts.prune_betterunions) {
                        bool better = false;
                        for (std::size_t a2 = 0; a2 < rows && ! better; ++a2)
                            for (std::size_t b2 = 0; b2 < cols && ! better; ++b2)
                                if ((a2 != a || b2 != b) && d.reaches(L[a2].first, la) && d.reaches(R[b2].first, lb)
                                    && d.sup(L[a2].first, R[b2].first) == s)
                                    better = true;
                        if (better)
                            continue;
                    }
                    for (std::size_t i = 0; i < rows; ++i)
                        rowrem[i] = L[i].second;
                    for (std::size_t j = 0; j < cols; ++j)
                        colrem[j] = R[j].second;
                    --rowrem[a];
                    --colrem[b];
                    enumerate(rows, cols, rowrem, colrem, x, 0, [&](const vector<std::uint32_t> & xs) {
                        DLine out;
                        out.emplace_back(s, 1);
                        for (std::size_t k = 0; k < xs.size(); ++k)
                            if (xs[k])
                                out.emplace_back(inf_table[k], xs[k]);
                        normalize(out);
                        emit(std::move(out), a, b, xs, inf_table);
                    });
                }
        }

        template <typename F>
        static void enumerate(std::size_t rows, std::size_t cols, vector<std::uint32_t> & rowrem, vector<std::uint32_t> & colrem,
            vector<std::uint32_t> & x, std::size_t cell, F && f)
        {
            if (cell == rows * cols) {
                f(x);
                return;
            }
            std::size_t i = cell / cols, j = cell % cols;
            std::uint32_t hi = std::min(rowrem[i], colrem[j]);
            std::uint32_t lo = 0;
            if (j + 1 == cols)
                lo = rowrem[i];  // the last column takes what is left of the row
            if (i + 1 == rows)
                lo = std::max(lo, colrem[j]);  // and the last row what is left of the column
            if (lo > hi)
                return;
            for (std::uint32_t v = lo; v <= hi; ++v) {
                x[cell] = v;
                rowrem[i] -= v;
                colrem[j] -= v;
                enumerate(rows, cols, rowrem, colrem, x, cell + 1, f);
                rowrem[i] += v;
                colrem[j] += v;
            }
            x[cell] = 0;
        }

        static auto slot_origins(const DLine & L, const DLine & R, std::size_t a, std::size_t b, LabelId s,
            const vector<std::uint32_t> & xs, const vector<LabelId> & inf_table) -> vector<SlotOrigin>
        {
            std::size_t cols = R.size();
            vector<std::uint32_t> loff(L.size()), roff(R.size());
            for (std::size_t i = 1; i < L.size(); ++i)
                loff[i] = loff[i - 1] + L[i - 1].second;
            for (std::size_t j = 1; j < R.size(); ++j)
                roff[j] = roff[j - 1] + R[j - 1].second;
            vector<pair<LabelId, SlotOrigin>> tagged;
            tagged.push_back({s, {loff[a]++, roff[b]++, true}});
            for (std::size_t k = 0; k < xs.size(); ++k)
                for (std::uint32_t r = 0; r < xs[k]; ++r)
                    tagged.push_back({inf_table[k], {loff[k / cols]++, roff[k % cols]++, false}});
            std::stable_sort(tagged.begin(), tagged.end(), [](auto & p, auto & q) { return p.first < q.first; });
            vector<SlotOrigin> out;
            for (auto & t : tagged)
                out.push_back(t.second);
            return out;
        }
    };

}

auto d_combine(const Configuration & c1, const Configuration & c2, const CombineSpec & spec, const Diagram & d) -> Configuration
{
    if (! d.validated())
        throw Error("d_combine: diagram is not validated");
    if (c1.degree() != c2.degree())
        throw Error("d_combine: degree mismatch");
    auto s1 = to_concrete(to_dline(c1)), s2 = to_concrete(to_dline(c2));
    if (spec.matching.size() != s1.size() || spec.union_slot >= s1.size())
        throw Error("d_combine: matching does not cover every slot");
    Concrete out;
    for (std::size_t i = 0; i < s1.size(); ++i) {
        auto o = s2.at(spec.matching[i]);
        out.push_back(i == spec.union_slot ? d.sup(s1[i], o) : d.inf(s1[i], o));
    }
    std::sort(out.begin(), out.end());
    return to_configuration(out);
}

auto d_dominates(const Configuration & big, const Configuration & small, const Diagram & d) -> bool
{
    if (big.degree() != small.degree())
        return false;
    return dline_dominates(to_dline(big), to_dline(small), d);
}

auto Provenance::find_root(const Concrete & line) const -> optional<std::size_t>
{
    for (auto & [l, id] : roots)
        if (l == line)
            return id;
    return std::nullopt;
}

auto provenance_to_json(const Provenance & p) -> json
{
    json nodes = json::array();
    auto names_of = [&](const Concrete & c) {
        json arr = json::array();
        for (auto id : c)
            arr.push_back(p.names.at(id));
        return arr;
    };
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        auto & n = p.nodes[i];
        json jn{{"id", i}, {"line", names_of(n.line)}};
        if (n.kind == ProvNode::Kind::leaf) {
            jn["kind"] = "leaf";
            jn["input"] = n.input;
        }
        else {
            jn["kind"] = "combine";
            jn["left"] = n.left;
            jn["right"] = n.right;
            json slots = json::array();
            for (auto & s : n.slots)
                slots.push_back({s.left_slot, s.right_slot, s.sup});
            jn["slots"] = slots;
        }
        nodes.push_back(jn);
    }
    json roots = json::array();
    for (auto & [l, id] : p.roots)
        roots.push_back({{"line", names_of(l)}, {"node", id}});
    return {{"labels", p.names}, {"nodes", nodes}, {"roots", roots}};
}

auto provenance_from_json(const json & j) -> Provenance
{
    try {
        Provenance p;
        p.names = j.at("labels").get<vector<string>>();
        std::map<string, LabelId> ids;
        for (std::size_t i = 0; i < p.names.size(); ++i)
            ids[p.names[i]] = static_cast<LabelId>(i);
        auto read_line = [&](const json & arr) {
            Concrete c;
            for (auto & n : arr) {
                auto it = ids.find(n.get<string>());
                if (it == ids.end())
                    throw Error("provenance refers to unknown label '" + n.get<string>() + "'");
                c.push_back(it->second);
            }
            std::sort(c.begin(), c.end());
            return c;
        };
        for (auto & jn : j.at("nodes")) {
            ProvNode n;
            n.line = read_line(jn.at("line"));
            if (jn.at("kind") == "leaf") {
                n.kind = ProvNode::Kind::leaf;
                n.input = jn.at("input").get<std::size_t>();
            }
            else {
                n.kind = ProvNode::Kind::combine;
                n.left = jn.at("left").get<std::size_t>();
                n.right = jn.at("right").get<std::size_t>();
                for (auto & s : jn.at("slots"))
                    n.slots.push_back({s.at(0).get<std::uint32_t>(), s.at(1).get<std::uint32_t>(), s.at(2).get<bool>()});
                if (n.left >= p.nodes.size() || n.right >= p.nodes.size() || n.slots.size() != n.line.size())
                    throw Error("malformed provenance node");
            }
            p.nodes.push_back(std::move(n));
        }
        for (auto & jr : j.at("roots")) {
            auto node = jr.at("node").get<std::size_t>();
            if (node >= p.nodes.size())
                throw Error("provenance root refers to unknown node");
            p.roots.emplace_back(read_line(jr.at("line")), node);
        }
        return p;
    }
    catch (const json::exception & e) {
        throw Error(string("malformed provenance JSON: ") + e.what());
    }
}

auto slot_expression(const Provenance & p, std::size_t node, std::uint32_t slot) -> string
{
    auto & n = p.nodes.at(node);
    if (n.kind == ProvNode::Kind::leaf)
        return p.names.at(n.line.at(slot));
    auto & s = n.slots.at(slot);
    return (s.sup ? sup_op : inf_op) + "(" + slot_expression(p, n.left, s.left_slot) + "," + slot_expression(p, n.right, s.right_slot) + ")";
}

namespace {

    struct ExprParser {
        const string & s;
        const Diagram & d;
        std::size_t pos = 0;

        auto fail() -> Error { return Error("cannot evaluate expression at byte " + std::to_string(pos) + ": " + s); }

        auto parse() -> LabelId
        {
            for (auto & [op, is_sup] : {pair<const string &, bool>{sup_op, true}, pair<const string &, bool>{inf_op, false}}) {
                if (s.compare(pos, op.size() + 1, op + "(") == 0) {
                    pos += op.size() + 1;
                    auto a = parse();
                    if (pos >= s.size() || s[pos] != ',')
                        throw fail();
                    ++pos;
                    auto b = parse();
                    if (pos >= s.size() || s[pos] != ')')
                        throw fail();
                    ++pos;
                    return is_sup ? d.sup(a, b) : d.inf(a, b);
                }
            }
            // longest node name that ends at a delimiter
            optional<LabelId> best;
            std::size_t best_len = 0;
            for (LabelId i = 0; i < d.size(); ++i) {
                auto & nm = d.name(i);
                if (nm.size() > best_len && s.compare(pos, nm.size(), nm) == 0) {
                    auto end = pos + nm.size();
                    if (end == s.size() || s[end] == ',' || s[end] == ')') {
                        best = i;
                        best_len = nm.size();
                    }
                }
            }
            if (! best)
                throw fail();
            pos += best_len;
            return *best;
        }
    };

}

auto evaluate_expression(const string & expr, const Diagram & d) -> LabelId
{
    if (! d.validated())
        throw Error("evaluate_expression: diagram is not validated");
    ExprParser parser{expr, d};
    auto r = parser.parse();
    if (parser.pos != expr.size())
        throw parser.fail();
    return r;
}

auto provenance_replays(const Provenance & p, const Diagram & d) -> bool
{
    vector<LabelId> to_d(p.names.size());
    for (std::size_t i = 0; i < p.names.size(); ++i) {
        auto id = d.find(p.names[i]);
        if (! id)
            return false;
        to_d[i] = *id;
    }
    for (auto & n : p.nodes) {
        if (n.kind == ProvNode::Kind::leaf)
            continue;
        auto & L = p.nodes[n.left].line;
        auto & R = p.nodes[n.right].line;
        if (L.size() != n.line.size() || R.size() != n.line.size())
            return false;
        vector<bool> lused(L.size()), rused(R.size());
        for (std::size_t k = 0; k < n.slots.size(); ++k) {
            auto & s = n.slots[k];
            if (s.left_slot >= L.size() || s.right_slot >= R.size() || lused[s.left_slot] || rused[s.right_slot])
                return false;
            lused[s.left_slot] = rused[s.right_slot] = true;
            auto a = to_d[L[s.left_slot]], b = to_d[R[s.right_slot]];
            auto got = s.sup ? d.sup(a, b) : d.inf(a, b);
            if (got != to_d[n.line[k]])
                return false;
        }
        if (std::count_if(n.slots.begin(), n.slots.end(), [](auto & s) { return s.sup; }) != 1)
            return false;
    }
    return true;
}

auto format_tree(const Provenance & p, std::size_t root) -> string
{
    string out;
    std::set<std::size_t> printed;
    auto line_str = [&](const Concrete & c) {
        string s;
        for (auto id : c)
            s += (s.empty() ? "" : " ") + p.names.at(id);
        return s;
    };
    auto rec = [&](auto && self, std::size_t id, int indent) -> void {
        auto & n = p.nodes.at(id);
        out += string(static_cast<std::size_t>(indent) * 2, ' ') + "#" + std::to_string(id) + " " + line_str(n.line);
        if (n.kind == ProvNode::Kind::leaf) {
            out += "  <- input line " + std::to_string(n.input) + "\n";
            return;
        }
        if (printed.count(id)) {
            out += "  (shown above)\n";
            return;
        }
        printed.insert(id);
        out += "  <- #" + std::to_string(n.left) + " x #" + std::to_string(n.right) + " [";
        for (std::size_t k = 0; k < n.slots.size(); ++k)
            out += (k ? " " : "") + std::to_string(n.slots[k].left_slot + 1) + "/" + std::to_string(n.slots[k].right_slot + 1)
                + (n.slots[k].sup ? sup_op : inf_op);
        out += "]\n";
        self(self, n.left, indent + 1);
        self(self, n.right, indent + 1);
    };
    rec(rec, root, 0);
    return out;
}

auto fp(const Constraint & input, const Diagram & d, const FpOptions & opts) -> FpResult
{
    if (! d.validated())
        throw Error("fp: diagram is not validated");
    Engine eng{d, opts, depths(d), {}};
    eng.prov.names = d.names();

    // leaves: expanded input lines, first source line wins
    std::unordered_map<DLine, std::size_t, DLineHash> node_of;
    vector<DLine> start;
    for (std::size_t li = 0; li < input.lines.size(); ++li) {
        if (input.lines[li].degree() != input.arity)
            throw Error("fp: line degree differs from arity");
        for (auto & c : expand(input.lines[li])) {
            for (auto id : c)
                if (id >= d.size())
                    throw Error("fp: label id outside the diagram");
            auto l = to_dline(c);
            if (node_of.count(l))
                continue;
            if (opts.provenance) {
                ProvNode n;
                n.kind = ProvNode::Kind::leaf;
                n.input = li;
                n.line = c;
                eng.prov.nodes.push_back(std::move(n));
            }
            node_of.emplace(l, eng.prov.nodes.size() - 1);
            start.push_back(std::move(l));
        }
    }

    vector<DLine> all = eng.maximal(start);
    vector<DLine> fresh = all;
    std::uint64_t round = 0;
    while (! fresh.empty()) {
        if (++round > opts.max_rounds)
            throw BudgetExceeded("fp: more than " + std::to_string(opts.max_rounds) + " rounds");
        std::unordered_set<DLine, DLineHash> seen(all.begin(), all.end());
        std::unordered_map<DLine, Deriv, DLineHash> derivs;
        vector<DLine> candidates = all;
        std::set<DLine> fresh_set(fresh.begin(), fresh.end());
        for (auto & L : fresh)
            for (auto & R : all) {
                if (fresh_set.count(R) && R < L)
                    continue;
                eng.combine_pair(L, R, [&](DLine && c, std::size_t a, std::size_t b, const vector<std::uint32_t> & xs, const vector<LabelId> & inf_table) {
                    if (! seen.insert(c).second)
                        return;
                    if (seen.size() > opts.max_lines)
                        throw BudgetExceeded("fp: more than " + std::to_string(opts.max_lines) + " candidate lines");
                    if (opts.provenance)
                        derivs.emplace(c, Deriv{node_of.at(L), node_of.at(R), Engine::slot_origins(L, R, a, b, d.sup(L[a].first, R[b].first), xs, inf_table)});
                    candidates.push_back(std::move(c));
                });
            }
        auto next = eng.maximal(std::move(candidates));
        std::set<DLine> old(all.begin(), all.end());
        fresh.clear();
        for (auto & l : next)
            if (! old.count(l)) {
                fresh.push_back(l);
                if (opts.provenance) {
                    auto & dv = derivs.at(l);
                    ProvNode n;
                    n.kind = ProvNode::Kind::combine;
                    n.left = dv.left;
                    n.right = dv.right;
                    n.slots = dv.slots;
                    n.line = to_concrete(l);
                    eng.prov.nodes.push_back(std::move(n));
                }
                node_of[l] = eng.prov.nodes.size() - 1;
            }
        all = std::move(next);
        if (opts.progress)
            opts.progress(round, all.size());
    }

    FpResult res;
    res.rounds = round;
    res.lines.arity = input.arity;
    for (auto & l : all) {
        res.lines.lines.push_back(to_config(l));
        if (opts.provenance)
            eng.prov.roots.emplace_back(to_concrete(l), node_of.at(l));
    }
    res.lines.canonicalize();
    if (opts.provenance) {
        std::sort(eng.prov.roots.begin(), eng.prov.roots.end());
        res.provenance = std::move(eng.prov);
    }
    else
        res.provenance.names = d.names();
    return res;
}

auto gen_lift(const Constraint & lines, const Diagram & d) -> Constraint
{
    Constraint out{lines.arity, {}};
    for (auto & l : lines.lines) {
        Configuration c;
        for (auto & [id, m] : to_dline(l))
            c.parts.push_back({d.succ(id), m});
        c.canonicalize();
        out.lines.push_back(std::move(c));
    }
    out.canonicalize();
    return out;
}

auto fixed_point(const Problem & p, const Diagram & d, const FpOptions & opts) -> FixedPointRun
{
    if (! d.validated())
        throw Error("fixed_point: diagram is not validated");
    vector<LabelId> to_d(p.alphabet.size());
    for (std::size_t i = 0; i < p.alphabet.size(); ++i) {
        auto id = d.find(p.alphabet[i]);
        if (! id)
            throw Error("fixed_point: label '" + p.alphabet[i] + "' is not a diagram node");
        to_d[i] = *id;
    }
    FixedPointRun run;
    run.node_run = fp(relabel(p.node, to_d), d, opts);
    auto rd = d.reverse();
    run.edge_run = fp(relabel(p.edge, to_d), rd, opts);
    Problem out;
    out.alphabet = d.names();
    out.node = run.node_run.lines;
    out.edge = gen_lift(run.edge_run.lines, d);
    run.result = sort_alphabet(out);
    return run;
}

auto zero_round_witnesses(const Problem & p) -> vector<Configuration>
{
    vector<Configuration> out;
    auto edges = expansion(p.edge);
    for (auto & line : expansion(p.node)) {
        Concrete distinct = line;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        bool ok = true;
        Concrete cur;
        auto rec = [&](auto && self, std::size_t from) -> void {
            if (! ok)
                return;
            if (cur.size() == p.edge.arity) {
                if (! std::binary_search(edges.begin(), edges.end(), cur))
                    ok = false;
                return;
            }
            for (std::size_t k = from; k < distinct.size(); ++k) {
                cur.push_back(distinct[k]);
                self(self, k);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        if (ok)
            out.push_back(to_configuration(line));
    }
    return out;
}

auto trivial_witness_provenance(const FixedPointRun & run) -> vector<WitnessTrace>
{
    vector<WitnessTrace> out;
    auto & prov = run.node_run.provenance;
    std::map<string, LabelId> prov_id;
    for (std::size_t i = 0; i < prov.names.size(); ++i)
        prov_id[prov.names[i]] = static_cast<LabelId>(i);
    for (auto & w : zero_round_witnesses(run.result)) {
        Concrete c;
        for (auto & part : w.parts)
            c.insert(c.end(), part.mult, prov_id.at(run.result.alphabet.at(part.set.first())));
        std::sort(c.begin(), c.end());
        auto root = prov.find_root(c);
        if (! root)
            continue;
        WitnessTrace t{w, *root, {}};
        for (std::uint32_t s = 0; s < c.size(); ++s)
            t.expressions.push_back(slot_expression(prov, *root, s));
        out.push_back(std::move(t));
    }
    return out;
}

}
