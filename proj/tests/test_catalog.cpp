#include <doctest.h>

#include <refp/catalog.hpp>
#include <refp/errors.hpp>
#include <refp/fixedpoint.hpp>
#include <refp/newre.hpp>

#include <set>

using namespace refp;
using catalog::Family;
using catalog::Key;

namespace {

    auto over(const std::vector<std::string> & alphabet, const std::string & text) -> Problem
    {
        auto p = parse_problem(text);
        std::vector<LabelId> map;
        for (auto & nm : p.alphabet) {
            auto it = std::find(alphabet.begin(), alphabet.end(), nm);
            REQUIRE(it != alphabet.end());
            map.push_back(static_cast<LabelId>(it - alphabet.begin()));
        }
        Problem out;
        out.alphabet = alphabet;
        out.node = relabel(p.node, map);
        out.edge = relabel(p.edge, map);
        return out;
    }

    // Concrete lines as sorted name lists.
    auto named(const Constraint & c, const std::vector<std::string> & names) -> std::set<std::vector<std::string>>
    {
        std::set<std::vector<std::string>> out;
        for (auto & line : expansion(c)) {
            std::vector<std::string> v;
            for (auto id : line)
                v.push_back(names[id]);
            std::sort(v.begin(), v.end());
            out.insert(v);
        }
        return out;
    }

    // The fixed point of p under its family diagram, moved back onto p's label ids.
    void check_fixed_point(const Key & k)
    {
        auto p = catalog::generate(k);
        auto run = fixed_point(p, catalog::generate_diagram(k), FpOptions::all_prunes());
        std::vector<LabelId> map;
        for (auto & n : p.alphabet) {
            auto id = run.result.find_label(n);
            REQUIRE(id);
            map.push_back(*id);
        }
        CHECK(constraints_equal(run.result.node, relabel(p.node, map)));
        CHECK(constraints_equal(run.result.edge, relabel(p.edge, map)));
    }

}

TEST_CASE("sinkless orientation")
{
    auto p = catalog::generate({Family::sinkless_orientation, 3});
    auto expect = over(p.alphabet, "O [I O] [I O]\n\nI O\n");
    CHECK(constraints_equal(p.node, expect.node));
    CHECK(constraints_equal(p.edge, expect.edge));
    CHECK(p.delta_node() == 3);
}

TEST_CASE("delta coloring fixed point for three colors")
{
    auto p = catalog::generate({Family::delta_coloring_fp, 3});
    auto expect = over(p.alphabet, R"(1 1 1
2 2 2
3 3 3
12 12 _
13 13 _
23 23 _
123 _ _

_ [_ 1 2 3 12 23 13 123]
1 [_ 2 3 23]
2 [_ 1 3 13]
3 [_ 1 2 12]
12 [_ 3]
13 [_ 2]
23 [_ 1]
123 _
)");
    CHECK(constraints_equal(p.node, expect.node));
    CHECK(constraints_equal(p.edge, expect.edge));
    auto d = catalog::generate_diagram({Family::delta_coloring_fp, 3});
    CHECK(d.size() == 8);
    CHECK(d.validated());
}

TEST_CASE("delta coloring has 2^delta - 1 node lines")
{
    for (std::uint32_t D = 2; D <= 7; ++D)
        CHECK(catalog::generate({Family::delta_coloring_fp, D}).node.lines.size() == (1u << D) - 1);
}

TEST_CASE("c-coloring")
{
    auto p = catalog::generate({Family::c_coloring, 3, 3});
    auto expect = over(p.alphabet, "1 1 1\n2 2 2\n3 3 3\n\n1 2\n1 3\n2 3\n");
    CHECK(constraints_equal(p.node, expect.node));
    CHECK(constraints_equal(p.edge, expect.edge));
}

TEST_CASE("family diagrams")
{
    auto d2 = catalog::generate_diagram({Family::def2col_fp, 5});
    CHECK(d2.size() == 10);
    auto d3 = catalog::generate_diagram({Family::def3col_fp, 5});
    CHECK(d3.size() == 20);
    CHECK(d3.validated());
    // superset order: sup is intersection, inf the least superset of the union
    auto id = [&](const char * n) { return *d3.find(n); };
    CHECK(d3.sup(id("ACX"), id("XY")) == id("X"));
    CHECK(d3.inf(id("ACX"), id("XY")) == id("ACXY+"));
    CHECK(d3.inf(id("CX"), id("XY")) == id("CXY"));
    CHECK(d3.reaches(id("ABCXY+"), id("_")));
    CHECK(! d3.reaches(id("_"), id("C")));
    CHECK_THROWS_AS(catalog::generate_diagram({Family::sinkless_orientation, 3}), Error);
}

TEST_CASE("def3col case 7 and the tripled edge constraint")
{
    Key k{Family::def3col_fp, 5};
    CHECK(k.defect() == 1);
    auto p = catalog::generate_raw(k);
    auto lines = named(p.node, p.alphabet);
    CHECK(lines.count({"C", "C", "C", "C", "_"}) == 1);

    auto e2 = catalog::generate({Family::def2col_fp, 5});
    auto all = named(p.edge, p.alphabet);
    std::set<std::vector<std::string>> without_c;
    for (auto & l : all)
        if (std::none_of(l.begin(), l.end(), [](auto & n) { return n.find('C') != std::string::npos; }))
            without_c.insert(l);
    CHECK(without_c == named(e2.edge, e2.alphabet));
    // and every line with C has it on exactly one side
    for (auto & l : all) {
        auto with = std::count_if(l.begin(), l.end(), [](auto & n) { return n.find('C') != std::string::npos; });
        CHECK(with <= 1);
    }
}

TEST_CASE("generate drops only dominated lines")
{
    for (std::uint32_t D = 5; D <= 10; ++D) {
        Key k{Family::def3col_fp, D};
        auto raw = catalog::generate_raw(k);
        auto kept = catalog::generate(k);
        auto d = catalog::generate_diagram(k);
        REQUIRE(kept.alphabet == raw.alphabet);
        std::vector<LabelId> to_d;
        for (auto & n : raw.alphabet)
            to_d.push_back(*d.find(n));
        auto rn = relabel(raw.node, to_d), kn = relabel(kept.node, to_d);
        CHECK(kn.lines.size() <= rn.lines.size());
        for (auto & l : kn.lines)
            CHECK(std::find(rn.lines.begin(), rn.lines.end(), l) != rn.lines.end());
        for (auto & l : rn.lines) {
            bool covered = std::any_of(kn.lines.begin(), kn.lines.end(), [&](auto & b) { return d_dominates(b, l, d); });
            CHECK(covered);
        }
        CHECK(constraints_equal(raw.edge, kept.edge));
    }
}

TEST_CASE("parameter ranges")
{
    CHECK_THROWS_AS(catalog::check_range({Family::def3col_fp, 4}), Error);
    CHECK_THROWS_AS(catalog::check_range({Family::c_coloring, 3, 1}), Error);
    CHECK_THROWS_AS(catalog::generate({Family::delta_coloring_fp, 12}), Error);
    CHECK_NOTHROW(catalog::check_range({Family::def2col_fp, 3}));
    CHECK(catalog::parse_family("def3col-fp") == Family::def3col_fp);
    CHECK_THROWS_AS(catalog::parse_family("def4col"), Error);
    for (auto f : catalog::families())
        CHECK(catalog::parse_family(catalog::to_string(f)) == f);
}

TEST_CASE("family problems are their own fixed points")
{
    check_fixed_point({Family::delta_coloring_fp, 3});
    check_fixed_point({Family::delta_coloring_fp, 4});
    check_fixed_point({Family::def2col_fp, 4});
    check_fixed_point({Family::def2col_fp, 5});
    check_fixed_point({Family::def3col_fp, 5});
    check_fixed_point({Family::def3col_fp, 6});
}

TEST_CASE("def3col is a non-trivial round elimination fixed point")
{
    auto p = catalog::generate({Family::def3col_fp, 5});
    auto chk = is_fixed_point(p);
    CHECK(chk.yes);
    CHECK(! zero_round_solvable(p));
}
