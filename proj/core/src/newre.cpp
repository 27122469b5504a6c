#include <refp/newre.hpp>

#include "matching.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

using std::optional;
using std::string;
using std::vector;

namespace refp {

namespace {

    struct ConfigHash {
        auto operator()(const Configuration & c) const -> std::size_t
        {
            std::size_t h = c.parts.size();
            for (auto & p : c.parts)
                h = h * 1000003u ^ (p.set.hash() + p.mult * 0x9e3779b9u);
            return h;
        }
    };

    auto slots(const Configuration & c) -> vector<LabelSet>
    {
        vector<LabelSet> out;
        for (auto & p : c.parts)
            for (std::uint32_t k = 0; k < p.mult; ++k)
                out.push_back(p.set);
        return out;
    }

    template <typename Fits>
    auto type_matching(const Configuration & big, const Configuration & small, Fits fits) -> bool
    {
        vector<std::uint32_t> demand, capacity;
        for (auto & p : small.parts)
            demand.push_back(p.mult);
        for (auto & p : big.parts)
            capacity.push_back(p.mult);
        return detail::saturating_flow(demand, capacity,
            [&](std::size_t i, std::size_t j) { return fits(small.parts[i].set, big.parts[j].set); });
    }

    struct Table {
        std::size_t rows, cols;
        vector<LabelSet> inter;
        vector<char> allowed;
    };

    // Enumerates nonnegative integer tables over allowed cells with the given margins.
    template <typename Emit>
    void enumerate_tables(const Table & t, vector<std::uint32_t> & rowrem, vector<std::uint32_t> & colrem, vector<std::uint32_t> & x, std::size_t cell, Emit & emit)
    {
        if (cell == t.rows * t.cols) {
            if (std::all_of(rowrem.begin(), rowrem.end(), [](auto r) { return r == 0; })
                && std::all_of(colrem.begin(), colrem.end(), [](auto r) { return r == 0; }))
                emit(x);
            return;
        }
        std::size_t i = cell / t.cols, j = cell % t.cols;
        if (j == 0 && i > 0) {
            // row i-1 must be exhausted, and columns must stay fillable
            if (rowrem[i - 1] != 0)
                return;
            for (std::size_t c = 0; c < t.cols; ++c) {
                std::uint64_t avail = 0;
                for (std::size_t r = i; r < t.rows; ++r)
                    if (t.allowed[r * t.cols + c])
                        avail += rowrem[r];
                if (colrem[c] > avail)
                    return;
            }
        }
        if (! t.allowed[cell]) {
            enumerate_tables(t, rowrem, colrem, x, cell + 1, emit);
            return;
        }
        std::uint32_t hi = std::min(rowrem[i], colrem[j]);
        bool last_in_row = true;
        for (std::size_t c = j + 1; c < t.cols; ++c)
            if (t.allowed[i * t.cols + c])
                last_in_row = false;
        std::uint32_t lo = last_in_row ? rowrem[i] : 0;
        if (lo > hi)
            return;
        for (std::uint32_t v = lo; v <= hi; ++v) {
            x[cell] = v;
            rowrem[i] -= v;
            colrem[j] -= v;
            enumerate_tables(t, rowrem, colrem, x, cell + 1, emit);
            rowrem[i] += v;
            colrem[j] += v;
        }
        x[cell] = 0;
    }

    // Every combination of L and R over part types; results with an empty set are skipped.
    template <typename Emit>
    void combine_types(const Configuration & L, const Configuration & R, Emit && emit)
    {
        Table t{L.parts.size(), R.parts.size(), {}, {}};
        t.inter.resize(t.rows * t.cols);
        t.allowed.resize(t.rows * t.cols);
        for (std::size_t i = 0; i < t.rows; ++i)
            for (std::size_t j = 0; j < t.cols; ++j) {
                t.inter[i * t.cols + j] = L.parts[i].set & R.parts[j].set;
                t.allowed[i * t.cols + j] = ! t.inter[i * t.cols + j].empty();
            }
        vector<std::uint32_t> rowrem(t.rows), colrem(t.cols), x(t.rows * t.cols);
        for (std::size_t a = 0; a < t.rows; ++a)
            for (std::size_t b = 0; b < t.cols; ++b) {
                for (std::size_t i = 0; i < t.rows; ++i)
                    rowrem[i] = L.parts[i].mult;
                for (std::size_t j = 0; j < t.cols; ++j)
                    colrem[j] = R.parts[j].mult;
                --rowrem[a];
                --colrem[b];
                LabelSet u = L.parts[a].set | R.parts[b].set;
                auto build = [&](const vector<std::uint32_t> & xs) {
                    Configuration c;
                    c.parts.push_back({u, 1});
                    for (std::size_t k = 0; k < xs.size(); ++k)
                        if (xs[k])
                            c.parts.push_back({t.inter[k], xs[k]});
                    c.canonicalize();
                    emit(std::move(c));
                };
                enumerate_tables(t, rowrem, colrem, x, 0, build);
            }
    }

}

auto combine(const Configuration & c1, const Configuration & c2, const CombineSpec & spec) -> optional<Configuration>
{
    if (c1.degree() != c2.degree())
        throw Error("combine: degree mismatch");
    auto s1 = slots(c1), s2 = slots(c2);
    if (spec.matching.size() != s1.size() || spec.union_slot >= s1.size())
        throw Error("combine: matching does not cover every slot");
    {
        auto m = spec.matching;
        std::sort(m.begin(), m.end());
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != i)
                throw Error("combine: matching is not a permutation");
    }
    Configuration out;
    for (std::size_t i = 0; i < s1.size(); ++i) {
        auto & other = s2[spec.matching[i]];
        LabelSet s = i == spec.union_slot ? (s1[i] | other) : (s1[i] & other);
        if (s.empty())
            return std::nullopt;
        out.parts.push_back({s, 1});
    }
    out.canonicalize();
    return out;
}

auto weight(const Configuration & c) -> std::uint64_t
{
    std::uint64_t w = 0;
    for (auto & p : c.parts)
        w += p.set.size() * p.mult;
    return w;
}

auto dominates(const Configuration & big, const Configuration & small) -> bool
{
    if (big.degree() != small.degree())
        return false;
    if (! small.labels().subset_of(big.labels()))
        return false;
    return type_matching(big, small, [](const LabelSet & s, const LabelSet & b) { return s.subset_of(b); });
}

namespace {

    struct Weighted {
        std::uint64_t w;
        LabelSet all;
        Configuration c;
    };

    auto maximal_of(vector<Configuration> lines) -> vector<Configuration>
    {
        std::sort(lines.begin(), lines.end());
        lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
        vector<Weighted> ws;
        ws.reserve(lines.size());
        for (auto & c : lines)
            ws.push_back({weight(c), c.labels(), std::move(c)});
        std::stable_sort(ws.begin(), ws.end(), [](const Weighted & a, const Weighted & b) { return a.w > b.w; });
        vector<Weighted> kept;
        for (auto & cand : ws) {
            bool dominated = false;
            for (auto & k : kept)
                if (k.w > cand.w && cand.all.subset_of(k.all)
                    && type_matching(k.c, cand.c, [](const LabelSet & s, const LabelSet & b) { return s.subset_of(b); })) {
                    dominated = true;
                    break;
                }
            if (! dominated)
                kept.push_back(std::move(cand));
        }
        vector<Configuration> out;
        out.reserve(kept.size());
        for (auto & k : kept)
            out.push_back(std::move(k.c));
        std::sort(out.begin(), out.end());
        return out;
    }

}

auto discard_non_maximal(vector<Configuration> lines) -> vector<Configuration>
{
    for (auto & l : lines)
        l.canonicalize();
    return maximal_of(std::move(lines));
}

auto newre(const Constraint & input, const NewreOptions & opts) -> Constraint
{
    Constraint in = input;
    in.canonicalize();
    for (auto & l : in.lines)
        if (l.degree() != in.arity)
            throw Error("newre: line degree differs from arity");

    // Round 1 combines the raw input; later rounds pair only the new lines with everything.
    vector<Configuration> all = in.lines;
    vector<Configuration> fresh = in.lines;
    std::uint64_t round = 0;
    while (! fresh.empty()) {
        if (++round > opts.max_rounds)
            throw BudgetExceeded("newre: more than " + std::to_string(opts.max_rounds) + " rounds");
        std::unordered_set<Configuration, ConfigHash> seen(all.begin(), all.end());
        vector<Configuration> candidates = all;
        auto emit = [&](Configuration && c) {
            if (seen.insert(c).second) {
                if (seen.size() > opts.max_lines)
                    throw BudgetExceeded("newre: more than " + std::to_string(opts.max_lines) + " candidate lines");
                candidates.push_back(std::move(c));
            }
        };
        std::set<Configuration> fresh_set(fresh.begin(), fresh.end());
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            for (auto & other : all) {
                // pairs of two fresh lines are visited once
                if (fresh_set.count(other) && other < fresh[i])
                    continue;
                combine_types(fresh[i], other, emit);
            }
        }
        auto next = maximal_of(std::move(candidates));
        std::set<Configuration> old(all.begin(), all.end());
        fresh.clear();
        for (auto & c : next)
            if (! old.count(c))
                fresh.push_back(c);
        all = std::move(next);
        if (opts.progress)
            opts.progress(round, all.size());
    }
    return Constraint{in.arity, all};
}

auto exists_side(const Constraint & source, const vector<LabelSet> & new_alphabet, vector<std::size_t> * dropped) -> Constraint
{
    Constraint out{source.arity, {}};
    for (std::size_t li = 0; li < source.lines.size(); ++li) {
        auto & line = source.lines[li];
        Configuration c;
        bool empty_slot = false;
        for (auto & p : line.parts) {
            LabelSet s;
            for (std::size_t k = 0; k < new_alphabet.size(); ++k)
                if (new_alphabet[k].intersects(p.set))
                    s.insert(static_cast<LabelId>(k));
            if (s.empty()) {
                empty_slot = true;
                break;
            }
            c.parts.push_back({s, p.mult});
        }
        if (empty_slot) {
            if (dropped)
                dropped->push_back(li);
            continue;
        }
        c.canonicalize();
        out.lines.push_back(std::move(c));
    }
    out.canonicalize();
    return out;
}

auto name_label_sets(const vector<LabelSet> & sets, const vector<string> & old_names, bool rename) -> vector<string>
{
    vector<string> names(sets.size());
    if (! rename) {
        for (std::size_t i = 0; i < sets.size(); ++i) {
            string nm = "{";
            bool first = true;
            for (auto id : sets[i].members()) {
                nm += (first ? "" : ",") + old_names.at(id);
                first = false;
            }
            names[i] = nm + "}";
        }
        return names;
    }

    // new set S inherits the name of l when S is the unique minimal set containing l
    vector<vector<LabelId>> inherits(sets.size());
    for (LabelId l = 0; l < old_names.size(); ++l) {
        vector<std::size_t> containing;
        for (std::size_t k = 0; k < sets.size(); ++k)
            if (sets[k].contains(l))
                containing.push_back(k);
        vector<std::size_t> minimal;
        for (auto k : containing) {
            bool is_min = true;
            for (auto k2 : containing)
                if (k2 != k && sets[k2].subset_of(sets[k]))
                    is_min = false;
            if (is_min)
                minimal.push_back(k);
        }
        if (minimal.size() == 1)
            inherits[minimal[0]].push_back(l);
    }
    std::set<string> taken;
    for (std::size_t k = 0; k < sets.size(); ++k)
        if (inherits[k].size() == 1 && taken.insert(old_names[inherits[k][0]]).second)
            names[k] = old_names[inherits[k][0]];
    for (std::size_t k = 0; k < sets.size(); ++k) {
        if (! names[k].empty())
            continue;
        auto members = sets[k].members();
        bool single = std::all_of(members.begin(), members.end(), [&](LabelId id) { return old_names[id].size() == 1; });
        string nm;
        if (members.empty())
            nm = "_";
        else if (single)
            for (auto id : members)
                nm += old_names[id];
        else {
            nm = "(";
            for (std::size_t i = 0; i < members.size(); ++i)
                nm += (i ? "," : "") + old_names[members[i]];
            nm += ")";
        }
        while (! taken.insert(nm).second)
            nm += "'";
        names[k] = nm;
    }
    return names;
}

namespace {

    // universal side through newre, the other side through exists_side
    auto half_step(const Problem & p, bool edge_universal, const StepOptions & opts) -> Problem
    {
        const Constraint & uni = edge_universal ? p.edge : p.node;
        const Constraint & ex = edge_universal ? p.node : p.edge;
        auto result = newre(uni, opts.newre);

        std::set<LabelSet> distinct;
        for (auto & l : result.lines)
            for (auto & part : l.parts)
                distinct.insert(part.set);
        vector<LabelSet> alphabet(distinct.begin(), distinct.end());
        std::map<LabelSet, LabelId> index;
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            index[alphabet[i]] = static_cast<LabelId>(i);

        Constraint uni_new{uni.arity, {}};
        for (auto & l : result.lines) {
            Configuration c;
            for (auto & part : l.parts)
                c.parts.push_back({LabelSet::singleton(index.at(part.set)), part.mult});
            c.canonicalize();
            uni_new.lines.push_back(std::move(c));
        }
        uni_new.canonicalize();
        auto ex_new = exists_side(ex, alphabet);

        Problem out;
        out.alphabet = name_label_sets(alphabet, p.alphabet, opts.rename);
        (edge_universal ? out.edge : out.node) = std::move(uni_new);
        (edge_universal ? out.node : out.edge) = std::move(ex_new);
        return sort_alphabet(out);
    }

}

auto re_step(const Problem & p, const StepOptions & opts) -> Problem
{
    return half_step(p, true, opts);
}

auto rere_step(const Problem & p, const StepOptions & opts) -> Problem
{
    return half_step(p, false, opts);
}

auto full_step(const Problem & p, const StepOptions & opts) -> Problem
{
    return sort_alphabet(remove_unused_labels(rere_step(re_step(p, opts), opts)));
}

auto is_fixed_point(const Problem & p, const StepOptions & opts, std::uint64_t renaming_budget) -> FixedPointCheck
{
    FixedPointCheck res;
    res.intermediate = re_step(p, opts);
    res.stepped = sort_alphabet(remove_unused_labels(rere_step(res.intermediate, opts)));
    auto r = equal_up_to_renaming(res.stepped, p, renaming_budget);
    res.yes = r.status == RenamingStatus::found;
    res.undecided = r.status == RenamingStatus::undecided;
    res.renaming = r.mapping;
    return res;
}

auto brute_force_universal(const Constraint & input, std::size_t alphabet_size, std::size_t max_alphabet, std::uint32_t max_arity) -> Constraint
{
    if (alphabet_size > max_alphabet || input.arity > max_arity)
        throw BudgetExceeded("brute_force_universal: instance above the configured bound");
    Constraint out{input.arity, {}};
    if (input.lines.empty())
        return out;
    auto allowed = expansion(input);
    vector<LabelSet> subsets;
    for (std::uint32_t mask = 1; mask < (1u << alphabet_size); ++mask) {
        LabelSet s;
        for (std::size_t b = 0; b < alphabet_size; ++b)
            if (mask >> b & 1u)
                s.insert(static_cast<LabelId>(b));
        subsets.push_back(s);
    }
    vector<Configuration> good;
    vector<std::size_t> pick;
    auto rec = [&](auto && self, std::size_t from) -> void {
        if (pick.size() == input.arity) {
            Configuration c;
            for (auto k : pick)
                c.parts.push_back({subsets[k], 1});
            c.canonicalize();
            auto e = expand(c);
            if (std::all_of(e.begin(), e.end(), [&](const Concrete & x) { return std::binary_search(allowed.begin(), allowed.end(), x); }))
                good.push_back(std::move(c));
            return;
        }
        for (std::size_t k = from; k < subsets.size(); ++k) {
            pick.push_back(k);
            self(self, k);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    out.lines = discard_non_maximal(std::move(good));
    return out;
}

}
