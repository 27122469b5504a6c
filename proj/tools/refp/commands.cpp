#include "commands.hpp"

#include <refp/diagram.hpp>
#include <refp/errors.hpp>
#include <refp/fixedpoint.hpp>
#include <refp/json_io.hpp>
#include <refp/lincheck.hpp>
#include <refp/newre.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

using nlohmann::json;
using std::string;

namespace refp::cli {

namespace {

    auto is_json(const string & text) -> bool
    {
        auto pos = text.find_first_not_of(" \t\r\n");
        return pos != string::npos && text[pos] == '{';
    }

    auto parse_json(const string & text) -> json
    {
        try {
            return json::parse(text);
        }
        catch (const json::parse_error & e) {
            throw Error(string("malformed JSON: ") + e.what());
        }
    }

    auto load_problem(const string & text) -> Problem
    {
        return is_json(text) ? problem_from_json(parse_json(text)) : parse_problem(text);
    }

    auto load_diagram(const string & text) -> Diagram
    {
        return is_json(text) ? diagram_from_json(parse_json(text)) : parse_diagram(text);
    }

    auto problem_result(const Problem & p) -> CommandResult
    {
        return {ok, problem_to_json(p), serialize_problem(p)};
    }

    auto step_name(StepKind k) -> string
    {
        switch (k) {
        case StepKind::re:
            return "re";
        case StepKind::rere:
            return "rere";
        case StepKind::full:
            return "step";
        }
        return "?";
    }

    auto newre_progress(const Progress & progress, const string & what) -> std::function<void(std::uint64_t, std::size_t)>
    {
        if (! progress)
            return {};
        return [progress, what](std::uint64_t round, std::size_t size) {
            progress(what + " round " + std::to_string(round) + " lines " + std::to_string(size));
        };
    }

    auto violation_json(const Diagram & d, const Violation & v) -> json
    {
        return {{"kind", to_string(v.kind)}, {"a", d.name(v.a)}, {"b", d.name(v.b)}};
    }

    auto violation_text(const Diagram & d, const Violation & v) -> string
    {
        switch (v.kind) {
        case ViolationKind::cycle:
            return "cycle through " + d.name(v.a) + " and " + d.name(v.b);
        case ViolationKind::no_unique_inf:
            return d.name(v.a) + " and " + d.name(v.b) + " have no unique greatest common predecessor";
        case ViolationKind::no_unique_sup:
            return d.name(v.a) + " and " + d.name(v.b) + " have no unique least common successor";
        }
        return "invalid";
    }

    // "XY XY XY" or "XY^3", names of the given list
    auto parse_line(const string & text, const std::vector<string> & names) -> Concrete
    {
        std::istringstream in(text);
        string tok;
        Concrete out;
        while (in >> tok) {
            std::uint32_t mult = 1;
            auto caret = tok.find('^');
            if (caret != string::npos) {
                try {
                    mult = static_cast<std::uint32_t>(std::stoul(tok.substr(caret + 1)));
                }
                catch (const std::exception &) {
                    throw Error("bad exponent in '" + tok + "'");
                }
                tok = tok.substr(0, caret);
            }
            auto it = std::find(names.begin(), names.end(), tok);
            if (it == names.end())
                throw Error("unknown label '" + tok + "'");
            out.insert(out.end(), mult, static_cast<LabelId>(it - names.begin()));
        }
        if (out.empty())
            throw Error("empty line");
        std::sort(out.begin(), out.end());
        return out;
    }

}

auto read_file(const string & path) -> string
{
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw Error("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

auto guarded(const std::function<CommandResult()> & f) -> CommandResult
{
    try {
        return f();
    }
    catch (const BudgetExceeded & e) {
        return {budget, {{"error", e.what()}, {"kind", "budget"}}, string("budget exceeded: ") + e.what() + "\n"};
    }
    catch (const Error & e) {
        return {usage, {{"error", e.what()}, {"kind", "input"}}, string("error: ") + e.what() + "\n"};
    }
    catch (const json::exception & e) {
        return {usage, {{"error", e.what()}, {"kind", "input"}}, string("error: ") + e.what() + "\n"};
    }
}

auto cmd_parse(const string & problem) -> CommandResult
{
    return problem_result(load_problem(problem));
}

auto cmd_step(const string & problem, StepKind kind, bool rename, const Progress & progress) -> CommandResult
{
    auto p = load_problem(problem);
    StepOptions opts;
    opts.rename = rename;
    opts.newre.progress = newre_progress(progress, step_name(kind));
    switch (kind) {
    case StepKind::re:
        return problem_result(re_step(p, opts));
    case StepKind::rere:
        return problem_result(rere_step(p, opts));
    case StepKind::full:
        return problem_result(full_step(p, opts));
    }
    return {};
}

auto cmd_fixedpoint(const FixedpointArgs & a, const Progress & progress) -> CommandResult
{
    auto p = load_problem(a.problem);
    Diagram d;
    if (a.diagram)
        d = load_diagram(*a.diagram);
    else
        d = default_diagram(p).diagram;
    if (auto v = d.validate())
        throw Error("diagram is not valid: " + violation_text(d, *v));

    auto opts = a.prune ? FpOptions::all_prunes() : FpOptions{};
    opts.provenance = a.provenance;
    if (progress)
        opts.progress = [&](std::uint64_t round, std::size_t size) {
            progress("fp round " + std::to_string(round) + " lines " + std::to_string(size));
        };
    auto run = fixed_point(p, d, opts);

    CommandResult r;
    r.payload["problem"] = problem_to_json(run.result);
    r.payload["diagram"] = diagram_to_json(d);
    r.payload["rounds"] = {{"node", run.node_run.rounds}, {"edge", run.edge_run.rounds}};
    auto witnesses = zero_round_witnesses(run.result);
    r.payload["trivial"] = ! witnesses.empty();
    json wj = json::array();
    for (auto & w : witnesses)
        wj.push_back(format_configuration(w, run.result.alphabet));
    r.payload["witnesses"] = wj;
    r.text = serialize_problem(run.result);
    if (witnesses.empty())
        r.text += "# not 0-round solvable\n";
    for (auto & w : witnesses)
        r.text += "# 0-round solvable with " + format_configuration(w, run.result.alphabet) + "\n";
    if (a.provenance) {
        json traces = json::array();
        for (auto & t : trivial_witness_provenance(run))
            traces.push_back({{"line", format_configuration(t.line, run.result.alphabet)},
                              {"root", t.root},
                              {"expressions", t.expressions}});
        r.payload["provenance"] = {{"node", provenance_to_json(run.node_run.provenance)},
                                   {"edge", provenance_to_json(run.edge_run.provenance)},
                                   {"diagram", diagram_to_json(d)},
                                   {"witnesses", traces}};
    }
    return r;
}

auto cmd_check_trivial(const string & problem) -> CommandResult
{
    auto p = load_problem(problem);
    auto witnesses = zero_round_witnesses(p);
    CommandResult r;
    json wj = json::array();
    for (auto & w : witnesses) {
        wj.push_back(format_configuration(w, p.alphabet));
        r.text += "0-round solvable with " + format_configuration(w, p.alphabet) + "\n";
    }
    r.payload = {{"trivial", ! witnesses.empty()}, {"witnesses", wj}};
    if (witnesses.empty())
        r.text = "not 0-round solvable\n";
    r.exit = witnesses.empty() ? ok : no;
    return r;
}

auto cmd_is_fixedpoint(const string & problem, const Progress & progress) -> CommandResult
{
    auto p = load_problem(problem);
    StepOptions opts;
    opts.newre.progress = newre_progress(progress, "step");
    auto chk = is_fixed_point(p, opts);
    CommandResult r;
    string verdict = chk.yes ? "yes" : chk.undecided ? "undecided" : "no";
    r.payload = {{"verdict", verdict}, {"stepped", problem_to_json(chk.stepped)}};
    if (chk.yes) {
        json ren = json::object();
        for (std::size_t i = 0; i < chk.renaming.size(); ++i)
            ren[chk.stepped.alphabet[i]] = p.alphabet[chk.renaming[i]];
        r.payload["renaming"] = ren;
    }
    r.text = "fixed point: " + verdict + "\n";
    if (! chk.yes)
        r.text += "# one step gives\n" + serialize_problem(chk.stepped);
    r.exit = chk.yes ? ok : chk.undecided ? budget : no;
    return r;
}

auto cmd_default_diagram(const string & problem) -> CommandResult
{
    auto p = load_problem(problem);
    auto dd = default_diagram(p);
    CommandResult r;
    r.payload = diagram_to_json(dd.diagram);
    json sets = json::object();
    for (std::size_t i = 0; i < dd.sets.size(); ++i) {
        json s = json::array();
        for (auto id : dd.sets[i].members())
            s.push_back(p.alphabet[id]);
        sets[dd.diagram.name(i)] = s;
    }
    r.payload["sets"] = sets;
    r.text = serialize_diagram(dd.diagram);
    return r;
}

auto cmd_validate_diagram(const string & diagram) -> CommandResult
{
    auto d = load_diagram(diagram);
    CommandResult r;
    if (auto v = d.validate()) {
        r.exit = no;
        r.payload = {{"valid", false}, {"violation", violation_json(d, *v)}};
        r.text = "invalid: " + violation_text(d, *v) + "\n";
        return r;
    }
    r.payload = {{"valid", true}, {"diagram", diagram_to_json(d)}};
    r.text = "valid (" + std::to_string(d.size()) + " nodes)\n";
    return r;
}

auto cmd_trace(const string & provenance, const string & line) -> CommandResult
{
    auto j = parse_json(provenance);
    if (j.contains("provenance"))
        j = j.at("provenance");
    auto d = diagram_from_json(j.at("diagram"));
    if (auto v = d.validate())
        throw Error("diagram in provenance file is not valid: " + violation_text(d, *v));
    CommandResult r;
    for (auto side : {"node", "edge"}) {
        auto prov = provenance_from_json(j.at(side));
        auto c = parse_line(line, prov.names);
        auto root = prov.find_root(c);
        if (! root)
            continue;
        json exprs = json::array();
        string text = string(side) + " line " + line + "\n" + format_tree(prov, *root);
        for (std::uint32_t s = 0; s < c.size(); ++s) {
            auto e = slot_expression(prov, *root, s);
            auto value = d.name(evaluate_expression(e, d));
            exprs.push_back({{"slot", s}, {"label", prov.names.at(prov.nodes.at(*root).line.at(s))}, {"expression", e},
                             {"value", value}});
            text += "slot " + std::to_string(s) + ": " + e + " = " + value + "\n";
        }
        r.payload = {{"side", side}, {"root", *root}, {"tree", format_tree(prov, *root)}, {"slots", exprs}};
        r.text = text;
        return r;
    }
    r.exit = no;
    r.payload = {{"found", false}};
    r.text = "line " + line + " is not a result line\n";
    return r;
}

auto cmd_verify_psi(const string & ledger, std::optional<std::size_t> entry) -> CommandResult
{
    auto l = lincheck::ledger_from_json(parse_json(ledger));
    if (entry && *entry >= l.entries.size())
        throw Error("ledger has " + std::to_string(l.entries.size()) + " entries");
    CommandResult r;
    json reports = json::array();
    bool all = true;
    for (std::size_t i = 0; i < l.entries.size(); ++i) {
        if (entry && i != *entry)
            continue;
        auto rep = lincheck::verify_entry(l.entries[i], l.assumptions, l.lines, l.diagram);
        auto rj = lincheck::report_to_json(rep);
        rj["entry"] = i;
        reports.push_back(rj);
        r.text += lincheck::format_report(rep);
        all = all && rep.valid;
    }
    r.payload = {{"problem", l.problem}, {"verdict", all ? "valid" : "unverified"}, {"entries", reports}};
    r.exit = all ? ok : no;
    return r;
}

auto cmd_catalog_list() -> CommandResult
{
    CommandResult r;
    json fams = json::array();
    for (auto f : catalog::families()) {
        fams.push_back({{"family", catalog::to_string(f)}, {"diagram", catalog::has_diagram(f)}});
        r.text += catalog::to_string(f) + (catalog::has_diagram(f) ? "  (with diagram)" : "") + "\n";
    }
    json fixtures = json::array();
    for (auto & k : catalog::fixtures())
        fixtures.push_back(catalog::to_string(k));
    r.payload = {{"families", fams}, {"fixtures", fixtures}};
    r.text += "fixtures:\n";
    for (auto & k : catalog::fixtures())
        r.text += "  " + catalog::to_string(k) + "\n";
    return r;
}

auto cmd_catalog_emit(const catalog::Key & key, bool diagram, bool raw) -> CommandResult
{
    catalog::check_range(key);
    if (diagram) {
        auto d = catalog::generate_diagram(key);
        return {ok, diagram_to_json(d), serialize_diagram(d)};
    }
    return problem_result(raw ? catalog::generate_raw(key) : catalog::generate(key));
}

}
