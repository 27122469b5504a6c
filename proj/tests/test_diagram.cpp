#include <doctest.h>

#include "oracles.hpp"

#include <refp/diagram.hpp>
#include <refp/errors.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace refp;

namespace {

    auto read_file(const std::string & name) -> std::string
    {
        std::ifstream in(std::string(REFP_DATA_DIR) + "/" + name);
        REQUIRE(in);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    auto id(const Diagram & d, const std::string & name) -> LabelId
    {
        auto i = d.find(name);
        REQUIRE(i);
        return *i;
    }

    void check_tables_against_oracle(const Diagram & d)
    {
        for (LabelId a = 0; a < d.size(); ++a)
            for (LabelId b = 0; b < d.size(); ++b) {
                auto s = oracle::least_common_successor(d, a, b);
                auto i = oracle::greatest_common_predecessor(d, a, b);
                REQUIRE(s);
                REQUIRE(i);
                CHECK(d.sup(a, b) == *s);
                CHECK(d.inf(a, b) == *i);
            }
    }

}

TEST_CASE("parse and serialize a diagram")
{
    auto d = parse_diagram("a -> b -> c\na -> c\nnode z\n# comment\n");
    CHECK(d.size() == 4);
    CHECK(d.reaches(id(d, "a"), id(d, "c")));
    CHECK(d.reaches(id(d, "a"), id(d, "a")));
    CHECK(! d.reaches(id(d, "c"), id(d, "a")));
    CHECK(serialize_diagram(d) == "node z\na -> b\nb -> c\n");
    CHECK(parse_diagram(serialize_diagram(d)) == d);
    CHECK(diagram_from_json(diagram_to_json(d)) == d);

    CHECK_THROWS_AS(parse_diagram("a -> \n"), ParseError);
    CHECK_THROWS_AS(parse_diagram("a b\n"), ParseError);
    CHECK_THROWS_AS(parse_diagram("a -> [b]\n"), ParseError);
}

TEST_CASE("validation reports cycles and missing bounds")
{
    auto cyc = parse_diagram("a -> b\nb -> a\n");
    auto v = cyc.validate();
    REQUIRE(v);
    CHECK(v->kind == ViolationKind::cycle);
    CHECK(! cyc.validated());

    // a, b both above c and d: two minimal common successors
    auto bowtie = parse_diagram("a -> c\na -> d\nb -> c\nb -> d\n");
    v = bowtie.validate();
    REQUIRE(v);
    CHECK(v->kind == ViolationKind::no_unique_inf);

    auto two_sinks = parse_diagram("top -> a\ntop -> b\n");
    v = two_sinks.validate();
    REQUIRE(v);
    CHECK(v->kind == ViolationKind::no_unique_sup);
    CHECK(std::min(v->a, v->b) == id(two_sinks, "a"));

    auto chain = parse_diagram("a -> b -> c\n");
    CHECK(! chain.validate());
    CHECK(chain.validated());
    check_tables_against_oracle(chain);
}

TEST_CASE("edge diagram and right-closed subsets of the toy problem")
{
    auto p = parse_problem(read_file("toy.txt"));
    auto ed = edge_diagram(p);
    std::vector<std::pair<std::string, std::string>> got;
    for (auto [a, b] : ed.reduced_edges())
        got.emplace_back(ed.name(a), ed.name(b));
    CHECK(got == std::vector<std::pair<std::string, std::string>>{{"A", "X"}, {"B", "Y"}});

    auto sets = right_closed_subsets(ed);
    std::vector<std::vector<bool>> reach(ed.size(), std::vector<bool>(ed.size()));
    for (LabelId a = 0; a < ed.size(); ++a)
        for (LabelId b = 0; b < ed.size(); ++b)
            reach[a][b] = ed.reaches(a, b);
    auto expect = oracle::right_closed(reach);
    CHECK(sets.size() == 9);
    std::set<std::vector<LabelId>> have;
    for (auto & s : sets) {
        auto mem = s.members();
        std::vector<LabelId> m(mem.begin(), mem.end());
        have.insert(m);
    }
    CHECK(have == expect);
    CHECK_THROWS_AS(right_closed_subsets(ed, 3), BudgetExceeded);
}

TEST_CASE("right-closed subsets match brute force on random DAGs")
{
    std::mt19937 rng(7);
    for (int iter = 0; iter < 60; ++iter) {
        std::size_t n = 1 + rng() % 7;
        std::vector<std::pair<LabelId, LabelId>> edges;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i)
            names.push_back("n" + std::to_string(i));
        for (LabelId a = 0; a < n; ++a)
            for (LabelId b = a + 1; b < n; ++b)
                if (rng() % 3 == 0)
                    edges.emplace_back(a, b);
        Diagram d(names, edges);
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
        for (LabelId a = 0; a < n; ++a)
            for (LabelId b = 0; b < n; ++b)
                reach[a][b] = d.reaches(a, b);
        std::set<std::vector<LabelId>> have;
        for (auto & s : right_closed_subsets(d)) {
            auto mem = s.members();
            std::vector<LabelId> m(mem.begin(), mem.end());
            have.insert(m);
        }
        CHECK(have == oracle::right_closed(reach));
    }
}

TEST_CASE("default diagram of the toy problem")
{
    auto p = parse_problem(read_file("toy.txt"));
    auto dd = default_diagram(p);
    auto & d = dd.diagram;
    std::vector<std::string> names = d.names();
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"A", "ABXY", "AXY", "B", "BXY", "X", "XY", "Y", "_"});
    REQUIRE(d.validated());

    // superset order: sup is intersection, inf is union
    for (LabelId a = 0; a < d.size(); ++a)
        for (LabelId b = 0; b < d.size(); ++b) {
            auto s = std::find(dd.sets.begin(), dd.sets.end(), dd.sets[a] & dd.sets[b]);
            auto i = std::find(dd.sets.begin(), dd.sets.end(), dd.sets[a] | dd.sets[b]);
            REQUIRE(s != dd.sets.end());
            REQUIRE(i != dd.sets.end());
            CHECK(d.sup(a, b) == static_cast<LabelId>(s - dd.sets.begin()));
            CHECK(d.inf(a, b) == static_cast<LabelId>(i - dd.sets.begin()));
        }
    check_tables_against_oracle(d);
    CHECK(d.sup(id(d, "A"), id(d, "B")) == id(d, "_"));
    CHECK(d.inf(id(d, "A"), id(d, "B")) == id(d, "ABXY"));
    CHECK(d.inf(id(d, "X"), id(d, "Y")) == id(d, "XY"));

    auto A = *p.find_label("A");
    CHECK(dd.sets[id(d, "A")] == (LabelSet::singleton(A) | LabelSet::singleton(*p.find_label("X"))));
    CHECK(dd.sets[id(d, "_")].empty());
}

TEST_CASE("tweaked toy diagram")
{
    auto d = parse_diagram(read_file("toy-tweaked.diagram"));
    REQUIRE(! d.validate());
    CHECK(d.size() == 10);
    check_tables_against_oracle(d);
    CHECK(d.inf(id(d, "A"), id(d, "XY")) == id(d, "AXY"));
    CHECK(d.sup(id(d, "A"), id(d, "XY")) == id(d, "X"));
    CHECK(d.sup(id(d, "AXY"), id(d, "BXY")) == id(d, "XY'"));
    CHECK(d.sup(id(d, "A"), id(d, "B")) == id(d, "_"));
    CHECK(d.inf(id(d, "X"), id(d, "Y")) == id(d, "XY"));

    auto r = d.reverse();
    REQUIRE(! r.validate());
    for (LabelId a = 0; a < d.size(); ++a)
        for (LabelId b = 0; b < d.size(); ++b) {
            CHECK(r.sup(a, b) == d.inf(a, b));
            CHECK(r.inf(a, b) == d.sup(a, b));
        }
    CHECK(r.reverse() == d);
}

TEST_CASE("subset diagram rejects non-lattices")
{
    // {a}, {b} with no common subset and no common superset
    std::vector<LabelSet> sets{LabelSet::singleton(0), LabelSet::singleton(1)};
    CHECK_THROWS_AS(subset_diagram(sets, {"a", "b"}), Error);
    sets.push_back(LabelSet{});
    sets.push_back(LabelSet::singleton(0) | LabelSet::singleton(1));
    auto d = subset_diagram(sets, {"a", "b", "_", "ab"});
    CHECK(d.validated());
    CHECK(d.sup(0, 1) == 2);
    CHECK(d.inf(0, 1) == 3);
}
