#include <doctest.h>

#include "commands.hpp"

#include <refp/json_io.hpp>
#include <refp/problem.hpp>

#include <fstream>
#include <sstream>

using namespace refp;
using namespace refp::cli;

namespace {

    auto data(const std::string & name) -> std::string { return read_file(std::string(REFP_DATA_DIR) + "/" + name); }

}

TEST_CASE("rere of sinkless orientation through the command layer")
{
    auto r = cmd_step(data("so.txt"), StepKind::rere, true);
    CHECK(r.exit == ok);
    auto got = parse_problem(r.text);
    CHECK(equal_up_to_renaming(got, parse_problem("O I I\n\n[O I] I\n")).status == RenamingStatus::found);
    // the JSON payload parses back to the same problem
    CHECK(problem_from_json(r.payload) == got);
    CHECK(cmd_parse(r.payload.dump()).text == r.text);
}

TEST_CASE("toy fixed point is trivial and traces back to input lines")
{
    FixedpointArgs a;
    a.problem = data("toy.txt");
    a.provenance = true;
    auto fp = cmd_fixedpoint(a);
    REQUIRE(fp.exit == ok);
    CHECK(fp.payload["trivial"] == true);

    auto t = cmd_check_trivial(fp.text);
    CHECK(t.exit == no);
    CHECK(t.payload["witnesses"] == nlohmann::json::array({"XY XY XY"}));

    auto tr = cmd_trace(fp.payload["provenance"].dump(), "XY^3");
    CHECK(tr.exit == ok);
    CHECK(tr.payload["side"] == "node");
    for (auto & s : tr.payload["slots"])
        CHECK(s["value"] == "XY");
    CHECK(cmd_trace(fp.payload["provenance"].dump(), "A A A").exit == no);
    CHECK(guarded([&] { return cmd_trace(fp.payload["provenance"].dump(), "Q"); }).exit == usage);

    a.diagram = data("toy-tweaked.diagram");
    a.provenance = false;
    auto tweaked = cmd_fixedpoint(a);
    CHECK(tweaked.payload["trivial"] == false);
    CHECK(cmd_check_trivial(tweaked.text).exit == ok);
}

TEST_CASE("is-fixedpoint exit codes")
{
    auto emitted = cmd_catalog_emit({catalog::Family::delta_coloring_fp, 3}, false, false);
    CHECK(cmd_is_fixedpoint(emitted.text).exit == ok);
    CHECK(cmd_is_fixedpoint(data("so.txt")).exit == no);
}

TEST_CASE("diagram validation names the offending pair")
{
    CHECK(cmd_validate_diagram(data("toy-tweaked.diagram")).exit == ok);
    // A and B have no common successor
    auto r = cmd_validate_diagram("C -> A\nC -> B\n");
    CHECK(r.exit == no);
    CHECK(r.payload["violation"]["kind"] == "no-unique-sup");
    CHECK(r.payload["violation"]["a"] == "A");
    CHECK(r.payload["violation"]["b"] == "B");
    auto dd = cmd_default_diagram(data("toy.txt"));
    CHECK(dd.exit == ok);
    CHECK(cmd_validate_diagram(dd.payload.dump()).exit == ok);
}

TEST_CASE("errors map to exit codes")
{
    CHECK(guarded([] { return cmd_parse("A [B\n\nA B\n"); }).exit == usage);
    CHECK(guarded([] { return cmd_parse("{ not json"); }).exit == usage);
    CHECK(guarded([] { return cmd_verify_psi(data("psi/def3col-worked.json"), 5); }).exit == usage);
    auto big = cmd_catalog_emit({catalog::Family::delta_coloring_fp, 6}, false, false);
    CHECK(guarded([&] { return cmd_default_diagram(big.text); }).exit == budget);
}

TEST_CASE("verify-psi on the worked entry")
{
    auto r = cmd_verify_psi(data("psi/def3col-worked.json"), 0);
    CHECK(r.exit == ok);
    CHECK(r.payload["verdict"] == "valid");
    CHECK(r.payload["entries"][0]["system_count"] == 36);
}
