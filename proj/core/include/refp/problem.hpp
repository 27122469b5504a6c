#pragma once

#include <refp/errors.hpp>
#include <refp/labelset.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace refp {

struct Part {
    LabelSet set;
    std::uint32_t mult = 1;

    friend auto operator<=>(const Part &, const Part &) = default;
    friend auto operator==(const Part &, const Part &) -> bool = default;
};

// A condensed configuration in run-length form. Canonical: parts sorted by
// set, no two parts with the same set, every multiplicity positive.
struct Configuration {
    std::vector<Part> parts;

    auto degree() const -> std::uint32_t;
    auto is_concrete() const -> bool;
    auto labels() const -> LabelSet;
    void canonicalize();

    friend auto operator<=>(const Configuration &, const Configuration &) = default;
    friend auto operator==(const Configuration &, const Configuration &) -> bool = default;
};

// Concrete configuration as a sorted multiset of label ids.
using Concrete = std::vector<LabelId>;

auto to_configuration(const Concrete & c) -> Configuration;

struct Constraint {
    std::uint32_t arity = 0;
    std::vector<Configuration> lines;

    void canonicalize();
    auto labels() const -> LabelSet;

    friend auto operator==(const Constraint &, const Constraint &) -> bool = default;
};

struct Problem {
    std::vector<std::string> alphabet;
    Constraint node;
    Constraint edge;

    auto delta_node() const -> std::uint32_t { return node.arity; }
    auto delta_edge() const -> std::uint32_t { return edge.arity; }
    auto find_label(const std::string & name) const -> std::optional<LabelId>;
    // Throws if a line has the wrong degree or mentions an unknown id.
    void validate() const;
    void canonicalize();

    friend auto operator==(const Problem &, const Problem &) -> bool = default;
};

auto is_valid_label_name(const std::string & name) -> bool;

auto parse_problem(const std::string & text) -> Problem;
auto serialize_problem(const Problem & p) -> std::string;
auto format_configuration(const Configuration & c, const std::vector<std::string> & names) -> std::string;
auto format_constraint(const Constraint & c, const std::vector<std::string> & names) -> std::string;

auto expand(const Configuration & c) -> std::vector<Concrete>;
// Sorted, deduplicated union of the expansions of every line.
auto expansion(const Constraint & c) -> std::vector<Concrete>;
auto constraints_equal(const Constraint & a, const Constraint & b) -> bool;

enum class RenamingStatus { found, absent, undecided };

struct RenamingResult {
    RenamingStatus status = RenamingStatus::absent;
    // mapping[id in p1] = id in p2, present when found
    std::vector<LabelId> mapping;
    std::uint64_t steps = 0;
};

auto equal_up_to_renaming(const Problem & p1, const Problem & p2, std::uint64_t budget = 1'000'000) -> RenamingResult;

// Returns a concrete witness node configuration when solvable.
auto zero_round_solvable(const Problem & p) -> std::optional<Configuration>;

auto remove_unused_labels(const Problem & p) -> Problem;

// Reassigns ids so that they follow the lexicographic order of names.
auto sort_alphabet(const Problem & p) -> Problem;

// Renames labels by an id map; old id i becomes new_ids[i].
auto relabel(const Configuration & c, const std::vector<LabelId> & new_ids) -> Configuration;
auto relabel(const Constraint & c, const std::vector<LabelId> & new_ids) -> Constraint;

}
