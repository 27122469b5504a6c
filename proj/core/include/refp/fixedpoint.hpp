#pragma once

#include <refp/diagram.hpp>
#include <refp/newre.hpp>
#include <refp/problem.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace refp {

// Configurations whose parts are single diagram nodes.
auto d_combine(const Configuration & c1, const Configuration & c2, const CombineSpec & spec, const Diagram & d) -> Configuration;
auto d_dominates(const Configuration & big, const Configuration & small, const Diagram & d) -> bool;

struct SlotOrigin {
    std::uint32_t left_slot, right_slot;
    bool sup;

    friend auto operator==(const SlotOrigin &, const SlotOrigin &) -> bool = default;
};

struct ProvNode {
    enum class Kind { leaf, combine } kind = Kind::leaf;
    std::size_t input = 0;  // leaf: index of the input line it was expanded from
    std::size_t left = 0, right = 0;
    // combine: one entry per slot of `line`
    std::vector<SlotOrigin> slots;
    Concrete line;
};

// Shared derivation DAG; each root line points at its first derivation.
struct Provenance {
    std::vector<std::string> names;
    std::vector<ProvNode> nodes;
    std::vector<std::pair<Concrete, std::size_t>> roots;

    auto find_root(const Concrete & line) const -> std::optional<std::size_t>;
};

auto provenance_to_json(const Provenance & p) -> nlohmann::json;
auto provenance_from_json(const nlohmann::json & j) -> Provenance;

// "⊔(a,b)" / "⊓(a,b)" expression for one slot of a node.
auto slot_expression(const Provenance & p, std::size_t node, std::uint32_t slot) -> std::string;
auto evaluate_expression(const std::string & expr, const Diagram & d) -> LabelId;
// Recomputes every combine node from its children.
auto provenance_replays(const Provenance & p, const Diagram & d) -> bool;
auto format_tree(const Provenance & p, std::size_t node) -> std::string;

struct FpOptions {
    bool prune_twocomb = false;
    bool prune_selfcomb = false;
    bool prune_betterunions = false;
    bool provenance = false;
    std::uint64_t max_rounds = 10'000;
    std::uint64_t max_lines = 5'000'000;
    std::function<void(std::uint64_t round, std::size_t size)> progress;

    static auto all_prunes() -> FpOptions
    {
        FpOptions o;
        o.prune_twocomb = o.prune_selfcomb = o.prune_betterunions = true;
        return o;
    }
};

struct FpResult {
    Constraint lines;  // over diagram ids
    Provenance provenance;
    std::uint64_t rounds = 0;
};

// Input labels are diagram ids; d must be validated.
auto fp(const Constraint & input, const Diagram & d, const FpOptions & opts = {}) -> FpResult;

auto gen_lift(const Constraint & lines, const Diagram & d) -> Constraint;

struct FixedPointRun {
    Problem result;  // alphabet = diagram node names
    FpResult node_run;
    FpResult edge_run;
};

auto fixed_point(const Problem & p, const Diagram & d, const FpOptions & opts = {}) -> FixedPointRun;

// Every concrete node line that solves the problem in 0 rounds.
auto zero_round_witnesses(const Problem & p) -> std::vector<Configuration>;

struct WitnessTrace {
    Configuration line;
    std::size_t root;
    std::vector<std::string> expressions;
};

// For a fixed_point run: provenance of every 0-round witness line.
auto trivial_witness_provenance(const FixedPointRun & run) -> std::vector<WitnessTrace>;

}
