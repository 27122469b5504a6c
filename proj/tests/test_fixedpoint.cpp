#include <doctest.h>

#include "oracles.hpp"

#include <refp/diagram.hpp>
#include <refp/fixedpoint.hpp>

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

    // Parses `text` and moves it onto `alphabet` by label name.
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

    const char * toy_default_expected = R"(A A X
B B Y
ABXY XY _
AXY BXY _
AXY X X
BXY Y Y
XY XY XY

[A X _] [B Y _]
_ [ABXY AXY BXY XY A B X Y _]
[Y _] [AXY A XY X Y _]
[X _] [BXY B XY X Y _]
[XY X Y _] [XY X Y _]
)";

    const char * toy_tweaked_expected = R"(A A X
B B Y
ABXY XY _
AXY BXY _
AXY X X
BXY Y Y
XY' XY XY

[A X _] [B Y _]
_ [ABXY AXY BXY XY XY' A B X Y _]
[Y _] [AXY A XY XY' X Y _]
[X _] [BXY B XY XY' X Y _]
[XY X Y _] [XY' XY X Y _]
)";

    auto concrete_set(const Constraint & c) -> std::set<Concrete>
    {
        auto e = expansion(c);
        return {e.begin(), e.end()};
    }

    auto combos() -> std::vector<FpOptions>
    {
        std::vector<FpOptions> out;
        for (int mask = 0; mask < 8; ++mask) {
            FpOptions o;
            o.prune_twocomb = mask & 1;
            o.prune_selfcomb = mask & 2;
            o.prune_betterunions = mask & 4;
            out.push_back(o);
        }
        return out;
    }

}

TEST_CASE("diagram combination and dominance")
{
    auto d = default_diagram(parse_problem(read_file("toy.txt"))).diagram;
    // AXY BXY _ matched 2 1 3 against A A X, union on the first position
    CHECK(d.sup(id(d, "BXY"), id(d, "A")) == id(d, "X"));
    CHECK(d.inf(id(d, "AXY"), id(d, "A")) == id(d, "AXY"));
    CHECK(d.inf(id(d, "_"), id(d, "X")) == id(d, "X"));

    auto line = [&](std::vector<std::string> names) {
        Concrete c;
        for (auto & n : names)
            c.push_back(id(d, n));
        std::sort(c.begin(), c.end());
        return to_configuration(c);
    };
    auto aax = line({"A", "A", "X"});
    auto bby = line({"B", "B", "Y"});
    CHECK(d_dominates(aax, line({"A", "A", "A"}), d));
    CHECK(d_dominates(line({"ABXY", "XY", "_"}), line({"ABXY", "AXY", "XY"}), d));
    CHECK(! d_dominates(aax, bby, d));
    CHECK(d_dominates(aax, aax, d));

    // first bullet: union A with B, A with B, X with Y
    CombineSpec spec;
    auto s1 = expand(aax)[0];
    auto s2 = expand(bby)[0];
    for (std::size_t i = 0; i < 3; ++i) {
        // match A to B and X to Y
        LabelId want = s1[i] == id(d, "X") ? id(d, "Y") : id(d, "B");
        for (std::uint32_t j = 0; j < 3; ++j)
            if (s2[j] == want && std::find(spec.matching.begin(), spec.matching.end(), j) == spec.matching.end()) {
                spec.matching.push_back(j);
                break;
            }
    }
    spec.union_slot = static_cast<std::uint32_t>(std::find(s1.begin(), s1.end(), id(d, "A")) - s1.begin());
    CHECK(d_combine(aax, bby, spec, d) == line({"_", "ABXY", "XY"}));
}

TEST_CASE("fixed point of the toy problem with the default diagram")
{
    auto p = parse_problem(read_file("toy.txt"));
    auto dd = default_diagram(p);
    auto run = fixed_point(p, dd.diagram, FpOptions::all_prunes());
    auto expect = over(run.result.alphabet, toy_default_expected);
    CHECK(constraints_equal(run.result.node, expect.node));
    CHECK(constraints_equal(run.result.edge, expect.edge));
    CHECK(run.result.alphabet.size() == 9);

    // XY XY XY solves it in zero rounds
    auto w = zero_round_solvable(run.result);
    REQUIRE(w);
    CHECK(format_configuration(*w, run.result.alphabet) == "XY XY XY");
}

TEST_CASE("fixed point of the toy problem with the tweaked diagram")
{
    auto p = parse_problem(read_file("toy.txt"));
    auto d = parse_diagram(read_file("toy-tweaked.diagram"));
    REQUIRE(! d.validate());
    auto run = fixed_point(p, d, FpOptions::all_prunes());
    auto expect = over(run.result.alphabet, toy_tweaked_expected);
    CHECK(constraints_equal(run.result.node, expect.node));
    CHECK(constraints_equal(run.result.edge, expect.edge));
    CHECK(! zero_round_solvable(run.result));
    CHECK(zero_round_witnesses(run.result).empty());
}

TEST_CASE("pruning does not change the result")
{
    auto p = parse_problem(read_file("toy.txt"));
    auto dd = default_diagram(p);
    auto tweaked = parse_diagram(read_file("toy-tweaked.diagram"));
    REQUIRE(! tweaked.validate());
    for (auto * d : {&dd.diagram, &tweaked}) {
        auto base = fixed_point(p, *d, {});
        for (auto & o : combos()) {
            auto r = fixed_point(p, *d, o);
            CHECK(r.result.alphabet == base.result.alphabet);
            CHECK(constraints_equal(r.result.node, base.result.node));
            CHECK(constraints_equal(r.result.edge, base.result.edge));
        }
    }
}

TEST_CASE("fp agrees with the brute-force closure")
{
    std::mt19937 rng(11);
    int checked = 0;
    for (int iter = 0; iter < 40; ++iter) {
        std::size_t sigma = 2 + rng() % 2;
        std::uint32_t arity = 2 + rng() % 2;
        std::string text;
        for (int side = 0; side < 2; ++side) {
            std::uint32_t ar = side == 0 ? arity : 2;
            std::size_t lines = 1 + rng() % 3;
            for (std::size_t l = 0; l < lines; ++l) {
                for (std::uint32_t s = 0; s < ar; ++s)
                    text += std::string(1, static_cast<char>('a' + rng() % sigma)) + " ";
                text += "\n";
            }
            text += side == 0 ? "\n" : "";
        }
        Problem p;
        try {
            p = parse_problem(text);
        }
        catch (const Error &) {
            continue;
        }
        DefaultDiagram dd;
        try {
            dd = default_diagram(p);
        }
        catch (const Error &) {
            continue;
        }
        // equivalent labels share one diagram node
        std::vector<LabelId> to_d;
        for (auto & nm : p.alphabet)
            if (auto i = dd.diagram.find(nm))
                to_d.push_back(*i);
        if (to_d.size() != p.alphabet.size())
            continue;
        auto node = relabel(p.node, to_d);
        auto expect = oracle::fp_closure(expansion(node), dd.diagram);
        for (auto & o : combos()) {
            auto got = fp(node, dd.diagram, o);
            CHECK(concrete_set(got.lines) == expect);
        }
        auto rd = dd.diagram.reverse();
        REQUIRE(! rd.validate());
        auto edge = relabel(p.edge, to_d);
        CHECK(concrete_set(fp(edge, rd, FpOptions::all_prunes()).lines) == oracle::fp_closure(expansion(edge), rd));
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("provenance of the zero-round witness")
{
    auto p = parse_problem(read_file("toy.txt"));
    auto dd = default_diagram(p);
    auto & d = dd.diagram;
    auto opts = FpOptions::all_prunes();
    opts.provenance = true;
    auto run = fixed_point(p, d, opts);

    auto & prov = run.node_run.provenance;
    CHECK(provenance_replays(prov, d));
    CHECK(prov.roots.size() == run.node_run.lines.lines.size());

    auto traces = trivial_witness_provenance(run);
    REQUIRE(traces.size() == 1);
    CHECK(format_configuration(traces[0].line, run.result.alphabet) == "XY XY XY");
    REQUIRE(traces[0].expressions.size() == 3);
    for (auto & e : traces[0].expressions)
        CHECK(evaluate_expression(e, d) == id(d, "XY"));
    CHECK(! format_tree(prov, traces[0].root).empty());

    auto back = provenance_from_json(provenance_to_json(prov));
    CHECK(provenance_to_json(back) == provenance_to_json(prov));
    CHECK(provenance_replays(back, d));
}

TEST_CASE("the three slot expressions for XY")
{
    auto d = default_diagram(parse_problem(read_file("toy.txt"))).diagram;
    auto tweaked = parse_diagram(read_file("toy-tweaked.diagram"));
    REQUIRE(! tweaked.validate());
    std::vector<std::string> exprs{
        "⊓(⊓(X,⊔(A,B)),⊓(Y,⊔(A,B)))",
        "⊔(⊓(A,⊓(A,Y)),⊓(B,⊓(B,X)))",
        "⊔(⊓(A,Y),⊓(B,X))",
        "⊓(⊔(A,⊓(B,X)),⊔(B,⊓(A,Y)))",
    };
    for (auto & e : exprs)
        CHECK(evaluate_expression(e, d) == id(d, "XY"));
    // the tweak sends unions of predecessors of XY to XY'
    CHECK(evaluate_expression(exprs[2], tweaked) == id(tweaked, "XY'"));
    CHECK(evaluate_expression(exprs[0], tweaked) == id(tweaked, "XY"));

    CHECK_THROWS_AS(evaluate_expression("⊔(A,B", d), Error);
    CHECK_THROWS_AS(evaluate_expression("Q", d), Error);
}

TEST_CASE("fixed point needs every label in the diagram")
{
    auto p = parse_problem(read_file("toy.txt"));
    auto d = parse_diagram("T -> A\nT -> B\nA -> X -> _\nB -> _\n");
    REQUIRE(! d.validate());
    CHECK_THROWS_AS(fixed_point(p, d, {}), Error);
    auto unvalidated = parse_diagram("A -> X\nB -> Y\n");
    CHECK_THROWS_AS(fixed_point(p, unvalidated, {}), Error);
}
