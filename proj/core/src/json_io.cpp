#include <refp/json_io.hpp>

#include <map>

using nlohmann::json;
using std::string;
using std::vector;

namespace refp {

auto configuration_to_json(const Configuration & c, const vector<string> & names) -> json
{
    json line = json::array();
    for (auto & p : c.parts) {
        json set = json::array();
        for (auto id : p.set.members())
            set.push_back(names.at(id));
        line.push_back({{"set", set}, {"mult", p.mult}});
    }
    return line;
}

auto problem_to_json(const Problem & p) -> json
{
    json j;
    j["alphabet"] = p.alphabet;
    j["delta_node"] = p.node.arity;
    j["delta_edge"] = p.edge.arity;
    j["node_lines"] = json::array();
    for (auto & l : p.node.lines)
        j["node_lines"].push_back(configuration_to_json(l, p.alphabet));
    j["edge_lines"] = json::array();
    for (auto & l : p.edge.lines)
        j["edge_lines"].push_back(configuration_to_json(l, p.alphabet));
    return j;
}

auto problem_from_json(const json & j) -> Problem
{
    try {
        Problem p;
        p.alphabet = j.at("alphabet").get<vector<string>>();
        std::map<string, LabelId> ids;
        for (std::size_t i = 0; i < p.alphabet.size(); ++i) {
            if (! is_valid_label_name(p.alphabet[i]))
                throw Error("invalid label name '" + p.alphabet[i] + "'");
            if (! ids.emplace(p.alphabet[i], static_cast<LabelId>(i)).second)
                throw Error("duplicate label name '" + p.alphabet[i] + "'");
        }
        p.node.arity = j.at("delta_node").get<std::uint32_t>();
        p.edge.arity = j.at("delta_edge").get<std::uint32_t>();
        auto read = [&](const json & lines, Constraint & c) {
            for (auto & jl : lines) {
                Configuration conf;
                for (auto & jp : jl) {
                    LabelSet s;
                    for (auto & n : jp.at("set")) {
                        auto it = ids.find(n.get<string>());
                        if (it == ids.end())
                            throw Error("unknown label '" + n.get<string>() + "'");
                        s.insert(it->second);
                    }
                    auto mult = jp.at("mult").get<std::uint32_t>();
                    if (mult == 0)
                        throw Error("multiplicity must be positive");
                    conf.parts.push_back({s, mult});
                }
                conf.canonicalize();
                c.lines.push_back(std::move(conf));
            }
        };
        read(j.at("node_lines"), p.node);
        read(j.at("edge_lines"), p.edge);
        p.canonicalize();
        p.validate();
        return p;
    }
    catch (const json::exception & e) {
        throw Error(string("malformed problem JSON: ") + e.what());
    }
}

}
