#include "commands.hpp"
#include "server.hpp"

#include <refp/errors.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using std::string;
using namespace refp::cli;

namespace {

    auto emit(const CommandResult & r, bool json) -> int
    {
        auto & out = r.exit == usage ? std::cerr : std::cout;
        if (json)
            std::cout << r.payload.dump(2) << "\n";
        else
            out << r.text;
        return r.exit;
    }

    auto default_port() -> int
    {
        if (auto env = std::getenv("REFP_PORT"))
            return std::atoi(env);
        return 8731;
    }

}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"refp: round elimination and fixed point toolkit"};
    app.require_subcommand(1);
    bool json = false, progress = false;
    app.add_flag("--json", json, "Print the structured payload as JSON");
    app.add_flag("--progress", progress, "Report rounds and sizes on stderr");

    string problem, diagram, provenance_out, ledger, line;
    bool rename = true, prune = false, raw = false, with_diagram = false;
    std::optional<std::size_t> entry;
    refp::catalog::Key key;
    string family;
    int port = default_port();

    auto * parse = app.add_subcommand("parse", "Parse and print a problem in canonical form");
    auto * re = app.add_subcommand("re", "Apply re");
    auto * rere = app.add_subcommand("rere", "Apply the second half of a round elimination step");
    auto * step = app.add_subcommand("step", "Apply a full round elimination step");
    for (auto * sc : {parse, re, rere, step})
        sc->add_option("problem", problem, "Problem file, text or JSON ('-' for stdin)")->required();
    for (auto * sc : {re, rere, step})
        sc->add_flag("!--no-rename", rename, "Keep set names instead of fresh labels");

    auto * fpc = app.add_subcommand("fixedpoint", "Compute the fixed point relaxation under a diagram");
    fpc->add_option("problem", problem)->required();
    fpc->add_option("diagram", diagram, "Diagram file; the default diagram when omitted");
    fpc->add_flag("--prune", prune, "Enable all pruning rules");
    fpc->add_option("--provenance", provenance_out, "Write derivation provenance to this file");

    auto * trivial = app.add_subcommand("check-trivial", "Exit 1 with a witness when 0-round solvable");
    trivial->add_option("problem", problem)->required();
    auto * isfp = app.add_subcommand("is-fixedpoint", "Check whether one step gives the same problem up to renaming");
    isfp->add_option("problem", problem)->required();
    auto * defd = app.add_subcommand("default-diagram", "Print the default diagram of a problem");
    defd->add_option("problem", problem)->required();
    auto * vald = app.add_subcommand("validate-diagram", "Check that a diagram is acyclic with unique sup and inf");
    vald->add_option("diagram", diagram)->required();

    auto * trace = app.add_subcommand("trace", "Show how a fixed point line was derived");
    trace->add_option("provenance", provenance_out, "File written by fixedpoint --provenance")->required();
    trace->add_option("line", line, "Line such as \"XY XY XY\" or \"XY^3\"")->required();

    auto * psi = app.add_subcommand("verify-psi", "Check a ledger of parametric combinations");
    psi->add_option("ledger", ledger)->required();
    psi->add_option("--entry", entry, "Only this entry (0-based)");

    auto * cat = app.add_subcommand("catalog", "Problem families");
    cat->require_subcommand(1);
    auto * list = cat->add_subcommand("list", "List families and fixtures");
    auto * emitc = cat->add_subcommand("emit", "Print a family member");
    emitc->add_option("family", family)->required();
    emitc->add_option("--delta", key.delta)->required();
    emitc->add_option("--colors", key.colors);
    emitc->add_flag("--diagram", with_diagram, "Print the family diagram instead");
    emitc->add_flag("--raw", raw, "Keep lines dominated under the family diagram");

    auto * srv = app.add_subcommand("serve", "Serve the commands as JSON over HTTP on 127.0.0.1");
    srv->add_option("--port", port, "Port (default $REFP_PORT or 8731)");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        auto code = app.exit(e);
        return code == 0 ? 0 : usage;
    }

    Progress report;
    if (progress)
        report = [](const string & s) { std::cerr << s << "\n"; };

    auto in = [](const string & path) { return read_file(path); };
    CommandResult r;
    if (*parse)
        r = guarded([&] { return cmd_parse(in(problem)); });
    else if (*re || *rere || *step) {
        auto kind = *re ? StepKind::re : *rere ? StepKind::rere : StepKind::full;
        r = guarded([&] { return cmd_step(in(problem), kind, rename, report); });
    }
    else if (*fpc) {
        r = guarded([&] {
            FixedpointArgs a;
            a.problem = in(problem);
            if (! diagram.empty())
                a.diagram = in(diagram);
            a.prune = prune;
            a.provenance = ! provenance_out.empty();
            auto res = cmd_fixedpoint(a, report);
            if (a.provenance) {
                std::ofstream out(provenance_out, std::ios::binary);
                if (! out)
                    throw refp::Error("cannot write " + provenance_out);
                out << res.payload.at("provenance").dump(1) << "\n";
                res.payload.erase("provenance");
            }
            return res;
        });
    }
    else if (*trivial)
        r = guarded([&] { return cmd_check_trivial(in(problem)); });
    else if (*isfp)
        r = guarded([&] { return cmd_is_fixedpoint(in(problem), report); });
    else if (*defd)
        r = guarded([&] { return cmd_default_diagram(in(problem)); });
    else if (*vald)
        r = guarded([&] { return cmd_validate_diagram(in(diagram)); });
    else if (*trace)
        r = guarded([&] { return cmd_trace(in(provenance_out), line); });
    else if (*psi)
        r = guarded([&] { return cmd_verify_psi(in(ledger), entry); });
    else if (*cat) {
        if (*list)
            r = cmd_catalog_list();
        else
            r = guarded([&] {
                key.family = refp::catalog::parse_family(family);
                return cmd_catalog_emit(key, with_diagram, raw);
            });
    }
    else if (*srv) {
        if (! serve(port)) {
            std::cerr << "cannot bind 127.0.0.1:" << port << "\n";
            return usage;
        }
        return ok;
    }
    return emit(r, json);
}
