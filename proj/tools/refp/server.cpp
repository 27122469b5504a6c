#include "server.hpp"

#include "commands.hpp"

#include <refp/errors.hpp>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <iostream>

using nlohmann::json;
using std::string;

namespace refp::cli {

namespace {

    // Request fields holding a problem, diagram or ledger may be text or a JSON object.
    auto field(const json & body, const string & key) -> string
    {
        if (! body.contains(key))
            throw Error("missing field '" + key + "'");
        auto & v = body.at(key);
        return v.is_string() ? v.get<string>() : v.dump();
    }

    auto optional_field(const json & body, const string & key) -> std::optional<string>
    {
        if (! body.contains(key) || body.at(key).is_null())
            return std::nullopt;
        return field(body, key);
    }

    auto flag(const json & body, const string & key, bool fallback) -> bool
    {
        return body.contains(key) ? body.at(key).get<bool>() : fallback;
    }

    auto step_kind(const json & body) -> StepKind
    {
        auto k = body.value("kind", string("step"));
        if (k == "re")
            return StepKind::re;
        if (k == "rere")
            return StepKind::rere;
        if (k == "step")
            return StepKind::full;
        throw Error("unknown step kind '" + k + "'");
    }

    using Handler = std::function<CommandResult(const json &)>;

    void route(httplib::Server & srv, const string & path, Handler h)
    {
        srv.Post(path, [h](const httplib::Request & req, httplib::Response & res) {
            auto r = guarded([&] {
                json body;
                try {
                    body = req.body.empty() ? json::object() : json::parse(req.body);
                }
                catch (const json::parse_error & e) {
                    throw Error(string("malformed request body: ") + e.what());
                }
                if (! body.is_object())
                    throw Error("request body must be a JSON object");
                return h(body);
            });
            json out = {{"exit", r.exit}, {"payload", r.payload}, {"text", r.text}};
            res.status = r.exit == usage ? 400 : 200;
            res.set_content(out.dump(), "application/json");
        });
    }

}

auto serve(int port) -> bool
{
    httplib::Server srv;
    route(srv, "/parse", [](const json & b) { return cmd_parse(field(b, "problem")); });
    route(srv, "/step", [](const json & b) {
        return cmd_step(field(b, "problem"), step_kind(b), flag(b, "rename", true));
    });
    route(srv, "/fixedpoint", [](const json & b) {
        FixedpointArgs a;
        a.problem = field(b, "problem");
        a.diagram = optional_field(b, "diagram");
        a.prune = flag(b, "prune", false);
        a.provenance = flag(b, "provenance", false);
        return cmd_fixedpoint(a);
    });
    route(srv, "/check-trivial", [](const json & b) { return cmd_check_trivial(field(b, "problem")); });
    route(srv, "/is-fixedpoint", [](const json & b) { return cmd_is_fixedpoint(field(b, "problem")); });
    route(srv, "/default-diagram", [](const json & b) { return cmd_default_diagram(field(b, "problem")); });
    route(srv, "/validate-diagram", [](const json & b) { return cmd_validate_diagram(field(b, "diagram")); });
    route(srv, "/trace", [](const json & b) {
        return cmd_trace(field(b, "provenance"), b.at("line").get<string>());
    });
    route(srv, "/verify-psi", [](const json & b) {
        std::optional<std::size_t> entry;
        if (b.contains("entry"))
            entry = b.at("entry").get<std::size_t>();
        return cmd_verify_psi(field(b, "ledger"), entry);
    });
    route(srv, "/catalog", [](const json & b) {
        if (! b.contains("family"))
            return cmd_catalog_list();
        catalog::Key k;
        k.family = catalog::parse_family(b.at("family").get<string>());
        k.delta = b.value("delta", 3u);
        k.colors = b.value("colors", 3u);
        return cmd_catalog_emit(k, flag(b, "diagram", false), flag(b, "raw", false));
    });

    if (! srv.bind_to_port("127.0.0.1", port))
        return false;
    std::cerr << "listening on http://127.0.0.1:" << port << "\n";
    return srv.listen_after_bind();
}

}
