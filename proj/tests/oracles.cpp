#include "oracles.hpp"

#include <algorithm>
#include <set>

using refp::Concrete;
using refp::LabelId;
using std::vector;

namespace oracle {

namespace {

    auto slot_list(const refp::Configuration & c) -> vector<refp::LabelSet>
    {
        vector<refp::LabelSet> out;
        for (auto & p : c.parts)
            for (std::uint32_t k = 0; k < p.mult; ++k)
                out.push_back(p.set);
        return out;
    }

    auto concrete_lines(const refp::Constraint & c) -> std::set<vector<LabelId>>
    {
        std::set<vector<LabelId>> out;
        for (auto & line : c.lines) {
            // plain cartesian product over slots
            auto sl = slot_list(line);
            vector<LabelId> cur;
            auto rec = [&](auto && self, std::size_t i) -> void {
                if (i == sl.size()) {
                    auto s = cur;
                    std::sort(s.begin(), s.end());
                    out.insert(s);
                    return;
                }
                for (auto id : sl[i].members()) {
                    cur.push_back(id);
                    self(self, i + 1);
                    cur.pop_back();
                }
            };
            rec(rec, 0);
        }
        return out;
    }

}

auto dominates_by_permutation(const refp::Configuration & big, const refp::Configuration & small) -> bool
{
    auto b = slot_list(big), s = slot_list(small);
    if (b.size() != s.size())
        return false;
    vector<std::size_t> perm(b.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < perm.size() && ok; ++i)
            ok = s[i].subset_of(b[perm[i]]);
        if (ok)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

auto zero_round(const refp::Problem & p) -> bool
{
    auto nodes = concrete_lines(p.node);
    auto edges = concrete_lines(p.edge);
    for (auto & n : nodes) {
        bool ok = true;
        // every sequence of delta_edge labels drawn from the node line, order ignored
        vector<LabelId> cur;
        auto rec = [&](auto && self) -> void {
            if (! ok)
                return;
            if (cur.size() == p.edge.arity) {
                auto s = cur;
                std::sort(s.begin(), s.end());
                if (! edges.count(s))
                    ok = false;
                return;
            }
            for (auto id : n) {
                cur.push_back(id);
                self(self);
                cur.pop_back();
            }
        };
        rec(rec);
        if (ok)
            return true;
    }
    return false;
}

auto renamable(const refp::Problem & a, const refp::Problem & b) -> bool
{
    if (a.alphabet.size() != b.alphabet.size() || a.node.arity != b.node.arity || a.edge.arity != b.edge.arity)
        return false;
    auto an = concrete_lines(a.node), ae = concrete_lines(a.edge);
    auto bn = concrete_lines(b.node), be = concrete_lines(b.edge);
    vector<LabelId> f(a.alphabet.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = static_cast<LabelId>(i);
    auto mapped = [&](const std::set<vector<LabelId>> & lines) {
        std::set<vector<LabelId>> out;
        for (auto & l : lines) {
            vector<LabelId> m;
            for (auto id : l)
                m.push_back(f[id]);
            std::sort(m.begin(), m.end());
            out.insert(m);
        }
        return out;
    };
    do {
        if (mapped(an) == bn && mapped(ae) == be)
            return true;
    } while (std::next_permutation(f.begin(), f.end()));
    return false;
}

auto parse(const char * text) -> refp::Problem
{
    return refp::parse_problem(text);
}

}

namespace oracle {

auto right_closed(const vector<vector<bool>> & reach) -> std::set<vector<LabelId>>
{
    std::set<vector<LabelId>> out;
    std::size_t n = reach.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a)
            for (std::size_t b = 0; b < n && ok; ++b)
                if ((mask >> a & 1) && reach[a][b] && ! (mask >> b & 1))
                    ok = false;
        if (! ok)
            continue;
        vector<LabelId> s;
        for (std::size_t a = 0; a < n; ++a)
            if (mask >> a & 1)
                s.push_back(static_cast<LabelId>(a));
        out.insert(s);
    }
    return out;
}

auto least_common_successor(const refp::Diagram & d, LabelId a, LabelId b) -> std::optional<LabelId>
{
    std::optional<LabelId> found;
    for (LabelId c = 0; c < d.size(); ++c) {
        if (! d.reaches(a, c) || ! d.reaches(b, c))
            continue;
        bool covers = true;
        for (LabelId x = 0; x < d.size(); ++x)
            if (d.reaches(a, x) && d.reaches(b, x) && ! d.reaches(c, x))
                covers = false;
        if (covers) {
            if (found)
                return std::nullopt;
            found = c;
        }
    }
    return found;
}

auto greatest_common_predecessor(const refp::Diagram & d, LabelId a, LabelId b) -> std::optional<LabelId>
{
    std::optional<LabelId> found;
    for (LabelId c = 0; c < d.size(); ++c) {
        if (! d.reaches(c, a) || ! d.reaches(c, b))
            continue;
        bool covers = true;
        for (LabelId x = 0; x < d.size(); ++x)
            if (d.reaches(x, a) && d.reaches(x, b) && ! d.reaches(x, c))
                covers = false;
        if (covers) {
            if (found)
                return std::nullopt;
            found = c;
        }
    }
    return found;
}

namespace {

    auto slot_dominates(const Concrete & big, const Concrete & small, const refp::Diagram & d) -> bool
    {
        vector<std::size_t> perm(big.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            perm[i] = i;
        do {
            bool ok = true;
            for (std::size_t i = 0; i < perm.size() && ok; ++i)
                ok = d.reaches(small[i], big[perm[i]]);
            if (ok)
                return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    }

    auto maximal(const std::set<Concrete> & lines, const refp::Diagram & d) -> std::set<Concrete>
    {
        std::set<Concrete> out;
        for (auto & l : lines) {
            bool dominated = false;
            for (auto & o : lines)
                if (o != l && slot_dominates(o, l, d))
                    dominated = true;
            if (! dominated)
                out.insert(l);
        }
        return out;
    }

}

auto fp_closure(const vector<Concrete> & lines, const refp::Diagram & d) -> std::set<Concrete>
{
    std::set<Concrete> all;
    for (auto l : lines) {
        std::sort(l.begin(), l.end());
        all.insert(l);
    }
    all = maximal(all, d);
    for (;;) {
        std::set<Concrete> next = all;
        for (auto & x : all)
            for (auto & y : all) {
                auto perm = y;
                do {
                    for (std::size_t u = 0; u < x.size(); ++u) {
                        Concrete c;
                        for (std::size_t i = 0; i < x.size(); ++i)
                            c.push_back(i == u ? d.sup(x[i], perm[i]) : d.inf(x[i], perm[i]));
                        std::sort(c.begin(), c.end());
                        next.insert(c);
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        next = maximal(next, d);
        if (next == all)
            return all;
        all = std::move(next);
    }
}

}
