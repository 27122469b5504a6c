#include <refp/diagram.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

using nlohmann::json;
using std::optional;
using std::pair;
using std::string;
using std::vector;

namespace refp {

auto to_string(ViolationKind k) -> string
{
    switch (k) {
    case ViolationKind::cycle: return "cycle";
    case ViolationKind::no_unique_inf: return "no-unique-inf";
    case ViolationKind::no_unique_sup: return "no-unique-sup";
    }
    return "?";
}

Diagram::Diagram(vector<string> names, vector<pair<LabelId, LabelId>> edges) :
    names_(std::move(names))
{
    std::size_t n = names_.size();
    {
        std::set<string> seen;
        for (auto & nm : names_) {
            if (! is_valid_label_name(nm))
                throw Error("invalid diagram node name '" + nm + "'");
            if (! seen.insert(nm).second)
                throw Error("duplicate diagram node '" + nm + "'");
        }
    }
    vector<vector<LabelId>> adj(n);
    for (auto [a, b] : edges) {
        if (a >= n || b >= n)
            throw Error("diagram edge refers to unknown node");
        adj[a].push_back(b);
    }
    succ_.assign(n, LabelSet{});
    for (std::size_t s = 0; s < n; ++s) {
        vector<LabelId> stack{static_cast<LabelId>(s)};
        LabelSet & seen = succ_[s];
        seen.insert(static_cast<LabelId>(s));
        while (! stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : adj[v])
                if (! seen.contains(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
        }
    }
    pred_.assign(n, LabelSet{});
    for (std::size_t a = 0; a < n; ++a)
        for (auto b : succ_[a].members())
            pred_[b].insert(static_cast<LabelId>(a));
}

auto Diagram::find(const string & name) const -> optional<LabelId>
{
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return static_cast<LabelId>(i);
    return std::nullopt;
}

auto Diagram::validate() -> optional<Violation>
{
    std::size_t n = names_.size();
    validated_ = false;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = a + 1; b < n; ++b)
            if (succ_[a].contains(b) && succ_[b].contains(a))
                return Violation{a, b, ViolationKind::cycle};

    sup_.assign(n * n, 0);
    inf_.assign(n * n, 0);
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = a; b < n; ++b) {
            auto common_pred = pred_[a] & pred_[b];
            vector<LabelId> maxpred;
            for (auto c : common_pred.members())
                if ((succ_[c] & common_pred) == LabelSet::singleton(c))
                    maxpred.push_back(c);
            if (maxpred.size() != 1)
                return Violation{a, b, ViolationKind::no_unique_inf};
            auto common_succ = succ_[a] & succ_[b];
            vector<LabelId> minsucc;
            for (auto c : common_succ.members())
                if ((pred_[c] & common_succ) == LabelSet::singleton(c))
                    minsucc.push_back(c);
            if (minsucc.size() != 1)
                return Violation{a, b, ViolationKind::no_unique_sup};
            inf_[a * n + b] = inf_[b * n + a] = maxpred[0];
            sup_[a * n + b] = sup_[b * n + a] = minsucc[0];
        }
    validated_ = true;
    return std::nullopt;
}

auto Diagram::reduced_edges() const -> vector<pair<LabelId, LabelId>>
{
    std::size_t n = names_.size();
    vector<pair<LabelId, LabelId>> out;
    for (LabelId a = 0; a < n; ++a)
        for (auto b : succ_[a].members()) {
            if (b == a || succ_[b].contains(a))
                continue;
            // keep a -> b when no intermediate c lies strictly between
            bool direct = true;
            for (auto c : succ_[a].members())
                if (c != a && c != b && succ_[c].contains(b)) {
                    direct = false;
                    break;
                }
            if (direct)
                out.emplace_back(a, b);
        }
    std::sort(out.begin(), out.end(), [&](auto & x, auto & y) {
        return std::tie(names_[x.first], names_[x.second]) < std::tie(names_[y.first], names_[y.second]);
    });
    return out;
}

auto Diagram::reverse() const -> Diagram
{
    vector<pair<LabelId, LabelId>> flipped;
    for (auto [a, b] : reduced_edges())
        flipped.emplace_back(b, a);
    // reduced_edges drops cycle members; keep them so reverse stays an involution
    std::size_t n = names_.size();
    for (LabelId a = 0; a < n; ++a)
        for (auto b : succ_[a].members())
            if (b != a && succ_[b].contains(a))
                flipped.emplace_back(b, a);
    Diagram r(names_, flipped);
    if (validated_)
        r.validate();
    return r;
}

auto parse_diagram(const string & text) -> Diagram
{
    std::istringstream in(text);
    string line;
    int line_no = 0;
    vector<pair<string, string>> named_edges;
    std::set<string> nodes;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != string::npos)
            line = line.substr(0, h);
        std::istringstream ls(line);
        vector<string> toks;
        string t;
        while (ls >> t)
            toks.push_back(t);
        if (toks.empty())
            continue;
        if (toks[0] == "node") {
            if (toks.size() < 2)
                throw ParseError("expected node name", line_no, 1);
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (! is_valid_label_name(toks[i]))
                    throw ParseError("invalid node name '" + toks[i] + "'", line_no, 1);
                nodes.insert(toks[i]);
            }
            continue;
        }
        if (toks.size() < 3 || toks.size() % 2 == 0)
            throw ParseError("expected 'a -> b'", line_no, 1);
        for (std::size_t i = 0; i < toks.size(); i += 2) {
            if (! is_valid_label_name(toks[i]) || toks[i] == "->")
                throw ParseError("invalid node name '" + toks[i] + "'", line_no, 1);
            nodes.insert(toks[i]);
            if (i + 1 < toks.size()) {
                if (toks[i + 1] != "->")
                    throw ParseError("expected '->'", line_no, 1);
                named_edges.emplace_back(toks[i], toks[i + 2]);
            }
        }
    }
    vector<string> names(nodes.begin(), nodes.end());
    std::map<string, LabelId> ids;
    for (std::size_t i = 0; i < names.size(); ++i)
        ids[names[i]] = static_cast<LabelId>(i);
    vector<pair<LabelId, LabelId>> edges;
    for (auto & [a, b] : named_edges)
        edges.emplace_back(ids.at(a), ids.at(b));
    return Diagram(names, edges);
}

auto serialize_diagram(const Diagram & d) -> string
{
    auto edges = d.reduced_edges();
    LabelSet touched;
    for (auto [a, b] : edges) {
        touched.insert(a);
        touched.insert(b);
    }
    vector<string> isolated;
    for (LabelId i = 0; i < d.size(); ++i)
        if (! touched.contains(i))
            isolated.push_back(d.name(i));
    std::sort(isolated.begin(), isolated.end());
    string out;
    for (auto & nm : isolated)
        out += "node " + nm + "\n";
    for (auto [a, b] : edges)
        out += d.name(a) + " -> " + d.name(b) + "\n";
    return out;
}

auto diagram_to_json(const Diagram & d) -> json
{
    vector<string> names = d.names();
    std::sort(names.begin(), names.end());
    json edges = json::array();
    for (auto [a, b] : d.reduced_edges())
        edges.push_back({d.name(a), d.name(b)});
    return {{"nodes", names}, {"edges", edges}};
}

auto diagram_from_json(const json & j) -> Diagram
{
    try {
        auto names = j.at("nodes").get<vector<string>>();
        std::map<string, LabelId> ids;
        for (std::size_t i = 0; i < names.size(); ++i)
            ids[names[i]] = static_cast<LabelId>(i);
        vector<pair<LabelId, LabelId>> edges;
        for (auto & e : j.at("edges")) {
            auto a = e.at(0).get<string>(), b = e.at(1).get<string>();
            if (! ids.count(a) || ! ids.count(b))
                throw Error("edge refers to unknown node");
            edges.emplace_back(ids.at(a), ids.at(b));
        }
        return Diagram(names, edges);
    }
    catch (const json::exception & e) {
        throw Error(string("malformed diagram JSON: ") + e.what());
    }
}

auto edge_diagram(const Problem & p) -> Diagram
{
    auto exp = expansion(p.edge);
    std::size_t n = p.alphabet.size();
    vector<pair<LabelId, LabelId>> edges;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b) {
            if (a == b)
                continue;
            bool ok = true;
            for (auto & c : exp) {
                auto it = std::find(c.begin(), c.end(), a);
                if (it == c.end())
                    continue;
                Concrete r = c;
                r[static_cast<std::size_t>(it - c.begin())] = b;
                std::sort(r.begin(), r.end());
                if (! std::binary_search(exp.begin(), exp.end(), r)) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                edges.emplace_back(a, b);
        }
    return Diagram(p.alphabet, edges);
}

namespace {

    auto size_then_lex(const LabelSet & a, const LabelSet & b) -> bool
    {
        auto sa = a.size(), sb = b.size();
        if (sa != sb)
            return sa < sb;
        return a < b;
    }

    void enumerate_closed(const Diagram & d, LabelId i, LabelSet in, LabelSet out, std::size_t cap, vector<LabelSet> & res)
    {
        while (i < d.size() && (in.contains(i) || out.contains(i)))
            ++i;
        if (i == d.size()) {
            if (res.size() >= cap)
                throw BudgetExceeded("more than " + std::to_string(cap) + " right-closed subsets");
            res.push_back(in);
            return;
        }
        if (! d.succ(i).intersects(out))
            enumerate_closed(d, i + 1, in | d.succ(i), out, cap, res);
        if (! d.pred(i).intersects(in))
            enumerate_closed(d, i + 1, in, out | d.pred(i), cap, res);
    }

}

auto right_closed_subsets(const Diagram & d, std::size_t cap) -> vector<LabelSet>
{
    vector<LabelSet> res;
    enumerate_closed(d, 0, {}, {}, cap, res);
    std::sort(res.begin(), res.end(), size_then_lex);
    return res;
}

auto subset_diagram(const vector<LabelSet> & sets, const vector<string> & names) -> Diagram
{
    if (sets.size() != names.size())
        throw Error("subset_diagram: one name per set required");
    vector<pair<LabelId, LabelId>> edges;
    for (LabelId a = 0; a < sets.size(); ++a)
        for (LabelId b = 0; b < sets.size(); ++b) {
            if (a != b && sets[a] == sets[b])
                throw Error("subset_diagram: duplicate set for '" + names[a] + "' and '" + names[b] + "'");
            if (a != b && sets[b].subset_of(sets[a]))
                edges.emplace_back(a, b);
        }
    Diagram d(names, edges);
    if (auto v = d.validate())
        throw Error("subset_diagram: " + to_string(v->kind) + " for (" + names[v->a] + ", " + names[v->b] + ")");
    return d;
}

auto default_diagram(const Problem & p, std::size_t max_nodes) -> DefaultDiagram
{
    auto ed = edge_diagram(p);
    auto sets = right_closed_subsets(ed, max_nodes);

    bool single_chars = std::all_of(p.alphabet.begin(), p.alphabet.end(), [](const string & s) { return s.size() == 1; });
    vector<string> names(sets.size());
    std::set<string> taken;
    // gen-sets first so original labels keep their names
    for (LabelId l = 0; l < p.alphabet.size(); ++l) {
        auto it = std::find(sets.begin(), sets.end(), ed.succ(l));
        auto idx = static_cast<std::size_t>(it - sets.begin());
        if (names[idx].empty() && taken.insert(p.alphabet[l]).second)
            names[idx] = p.alphabet[l];
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (! names[i].empty())
            continue;
        string nm;
        if (sets[i].empty())
            nm = "_";
        else if (single_chars) {
            for (auto id : sets[i].members())
                nm += p.alphabet[id];
        }
        else {
            nm = "(";
            for (auto id : sets[i].members())
                nm += (nm.size() > 1 ? "," : "") + p.alphabet[id];
            nm += ")";
        }
        while (! taken.insert(nm).second)
            nm += "'";
        names[i] = nm;
    }
    vector<pair<LabelId, LabelId>> edges;
    for (LabelId a = 0; a < sets.size(); ++a)
        for (LabelId b = 0; b < sets.size(); ++b)
            if (a != b && sets[b].subset_of(sets[a]))
                edges.emplace_back(a, b);
    DefaultDiagram out{Diagram(names, edges), sets};
    if (auto v = out.diagram.validate())
        throw Error("default diagram failed validation: " + to_string(v->kind));
    return out;
}

}
