#include <doctest.h>

#include "oracles.hpp"

#include <refp/newre.hpp>

#include <random>
#include <set>

using namespace refp;

namespace {

    auto line_set(const Problem & p, const Constraint & c) -> std::set<std::string>
    {
        std::set<std::string> out;
        for (auto & l : c.lines)
            out.insert(format_configuration(l, p.alphabet));
        return out;
    }

    auto conf(const Problem & p, std::vector<std::pair<std::string, std::uint32_t>> parts) -> Configuration
    {
        Configuration c;
        for (auto & [names, m] : parts) {
            LabelSet s;
            for (char ch : names)
                s.insert(*p.find_label(std::string(1, ch)));
            c.parts.push_back({s, m});
        }
        c.canonicalize();
        return c;
    }

    const char * re3col = "[A C E]^3\n[B C F]^3\n[D E F]^3\n\nA F\nB E\nD C\n";

}

TEST_CASE("combine examples")
{
    auto so = parse_problem("[I O] [I O] O\n\nI O\n");
    auto & l = so.node.lines[0];
    // the slots are O, [I O], [I O]; match O with one [I O] and union on it
    auto r = combine(l, l, CombineSpec{{1, 0, 2}, 0});
    REQUIRE(r);
    CHECK(format_configuration(*r, so.alphabet) == "[I O] [I O] O");

    auto p = parse_problem(re3col);
    auto ace = conf(p, {{"ACE", 3}}), bcf = conf(p, {{"BCF", 3}});
    auto c = combine(ace, bcf, CombineSpec{{0, 1, 2}, 0});
    REQUIRE(c);
    CHECK(*c == conf(p, {{"ABCEF", 1}, {"C", 2}}));

    auto bcdef = conf(p, {{"BCDEF", 1}, {"F", 2}});
    CHECK(! combine(ace, bcdef, CombineSpec{{0, 1, 2}, 0}));

    CHECK_THROWS_AS(combine(ace, conf(p, {{"A", 2}}), CombineSpec{{0, 1}, 0}), Error);
}

TEST_CASE("dominates")
{
    auto p = parse_problem(re3col);
    CHECK(dominates(conf(p, {{"ACE", 3}}), conf(p, {{"ACE", 2}, {"C", 1}})));
    CHECK(! dominates(conf(p, {{"ACE", 2}, {"C", 1}}), conf(p, {{"ACE", 3}})));
    auto so = parse_problem("I O\n\nI O\n");
    auto a = conf(so, {{"O", 1}, {"IO", 1}}), b = conf(so, {{"I", 1}, {"IO", 1}});
    CHECK(! dominates(a, b));
    CHECK(! dominates(b, a));
    CHECK(dominates(a, a));
}

TEST_CASE("dominates agrees with permutation search")
{
    std::mt19937 rng(3);
    for (int iter = 0; iter < 3000; ++iter) {
        std::uint32_t arity = 1 + rng() % 4;
        auto random_conf = [&] {
            Configuration c;
            for (std::uint32_t k = 0; k < arity; ++k) {
                LabelSet s;
                std::uint32_t mask = 1 + rng() % 15;
                for (LabelId b = 0; b < 4; ++b)
                    if (mask >> b & 1u)
                        s.insert(b);
                c.parts.push_back({s, 1});
            }
            c.canonicalize();
            return c;
        };
        auto x = random_conf(), y = random_conf();
        CHECK(dominates(x, y) == oracle::dominates_by_permutation(x, y));
    }
}

TEST_CASE("discard non maximal")
{
    auto p = parse_problem("A C\nB C\n\nA B\n");
    auto out = discard_non_maximal({conf(p, {{"AB", 1}, {"C", 1}}), conf(p, {{"A", 1}, {"C", 1}})});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == conf(p, {{"AB", 1}, {"C", 1}}));
    auto anti = std::vector<Configuration>{conf(p, {{"A", 2}}), conf(p, {{"B", 2}})};
    CHECK(discard_non_maximal(anti).size() == 2);
}

TEST_CASE("newre on the intermediate 3-coloring node constraint")
{
    auto p = parse_problem(re3col);
    std::vector<std::string> rounds;
    NewreOptions opts;
    auto out = newre(p.node, opts);
    CHECK(line_set(p, out) == std::set<std::string>{
        "[A C E] [A C E] [A C E]",
        "[B C F] [B C F] [B C F]",
        "[D E F] [D E F] [D E F]",
        "[A B C E F] C C",
        "[A C D E F] E E",
        "[B C D E F] F F",
    });
}

TEST_CASE("newre on sinkless orientation")
{
    auto so = parse_problem("[I O] [I O] O\n\nI O\n");
    auto out = newre(so.node);
    CHECK(line_set(so, out) == std::set<std::string>{"[I O] [I O] O"});
    auto single = parse_problem("A B C\n\nA B\n");
    CHECK(newre(single.node).lines == single.node.lines);
    Constraint empty{3, {}};
    CHECK(newre(empty).lines.empty());
}

TEST_CASE("newre matches brute force exhaustively for small alphabets")
{
    // every constraint over |alphabet| <= 2 with arity <= 3, and samples over 3 labels
    for (std::size_t n = 1; n <= 2; ++n)
        for (std::uint32_t arity = 1; arity <= 3; ++arity) {
            // all concrete multisets
            std::vector<Concrete> all;
            Concrete cur;
            auto rec = [&](auto && self, LabelId from) -> void {
                if (cur.size() == arity) {
                    all.push_back(cur);
                    return;
                }
                for (LabelId l = from; l < n; ++l) {
                    cur.push_back(l);
                    self(self, l);
                    cur.pop_back();
                }
            };
            rec(rec, 0);
            for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
                Constraint c{arity, {}};
                for (std::size_t k = 0; k < all.size(); ++k)
                    if (mask >> k & 1u)
                        c.lines.push_back(to_configuration(all[k]));
                c.canonicalize();
                CHECK(newre(c).lines == brute_force_universal(c, n).lines);
            }
        }
}

TEST_CASE("exists side")
{
    auto so = parse_problem("[I O] [I O] O\n\nI O\n");
    LabelId I = 0, O = 1;
    std::vector<LabelSet> alpha{LabelSet{O}, LabelSet{I, O}};
    auto e = exists_side(so.edge, alpha);
    REQUIRE(e.lines.size() == 1);
    // new ids: 0 = {O}, 1 = {I,O}
    Configuration want;
    want.parts = {{LabelSet{1}, 1}, {LabelSet{0, 1}, 1}};
    want.canonicalize();
    CHECK(e.lines[0] == want);

    std::vector<std::size_t> dropped;
    auto partial = exists_side(so.edge, {LabelSet{O}}, &dropped);
    CHECK(partial.lines.empty());
    CHECK(dropped == std::vector<std::size_t>{0});
}

TEST_CASE("rere of sinkless orientation")
{
    auto so = parse_problem("[I O] [I O] O\n\nI O\n");
    auto r = rere_step(so);
    CHECK(serialize_problem(r) == "I I O\n\nI [I O]\n");
    CHECK(equal_up_to_renaming(r, parse_problem("O I I\n\n[O I] I\n")).status == RenamingStatus::found);
    CHECK(! zero_round_solvable(r));

    StepOptions raw;
    raw.rename = false;
    auto rr = rere_step(so, raw);
    CHECK(rr.alphabet == std::vector<std::string>{"{I,O}", "{O}"});
}

TEST_CASE("re of 3-coloring")
{
    auto col = parse_problem("A A A\nB B B\nC C C\n\nA B\nA C\nB C\n");
    auto r = re_step(col);
    auto expected = parse_problem(re3col);
    CHECK(equal_up_to_renaming(r, expected).status == RenamingStatus::found);
}

TEST_CASE("full step on empty constraints")
{
    Problem p;
    p.node.arity = 3;
    p.edge.arity = 2;
    auto q = full_step(p);
    CHECK(q.alphabet.empty());
    CHECK(q.node.lines.empty());
    CHECK(q.edge.lines.empty());
}

TEST_CASE("full step is deterministic")
{
    auto so = parse_problem("[I O] [I O] O\n\nI O\n");
    auto a = serialize_problem(full_step(so));
    for (int k = 0; k < 3; ++k)
        CHECK(serialize_problem(full_step(so)) == a);
}
