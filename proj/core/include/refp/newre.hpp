#pragma once

#include <refp/problem.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace refp {

// Slot i of the first configuration is matched to slot matching[i] of the
// second, slots being numbered in canonical expanded order.
struct CombineSpec {
    std::vector<std::uint32_t> matching;
    std::uint32_t union_slot = 0;
};

auto combine(const Configuration & c1, const Configuration & c2, const CombineSpec & spec) -> std::optional<Configuration>;

// Sum of |set| * multiplicity.
auto weight(const Configuration & c) -> std::uint64_t;
auto dominates(const Configuration & big, const Configuration & small) -> bool;
auto discard_non_maximal(std::vector<Configuration> lines) -> std::vector<Configuration>;

struct NewreOptions {
    std::uint64_t max_rounds = 10'000;
    std::uint64_t max_lines = 2'000'000;
    std::function<void(std::uint64_t round, std::size_t size)> progress;
};

auto newre(const Constraint & input, const NewreOptions & opts = {}) -> Constraint;

// Replaces each label by the set of new labels containing it. Lines that would
// get an empty part are dropped and reported in `dropped`.
auto exists_side(const Constraint & source, const std::vector<LabelSet> & new_alphabet, std::vector<std::size_t> * dropped = nullptr) -> Constraint;

struct StepOptions {
    bool rename = true;
    NewreOptions newre;
};

// Display names for new labels that are sets of old labels.
auto name_label_sets(const std::vector<LabelSet> & sets, const std::vector<std::string> & old_names, bool rename) -> std::vector<std::string>;

auto re_step(const Problem & p, const StepOptions & opts = {}) -> Problem;
auto rere_step(const Problem & p, const StepOptions & opts = {}) -> Problem;
auto full_step(const Problem & p, const StepOptions & opts = {}) -> Problem;

struct FixedPointCheck {
    bool yes = false;
    bool undecided = false;
    Problem intermediate;
    Problem stepped;
    std::vector<LabelId> renaming;  // stepped id -> input id, when yes
};

auto is_fixed_point(const Problem & p, const StepOptions & opts = {}, std::uint64_t renaming_budget = 1'000'000) -> FixedPointCheck;

// Exhaustive universal-side computation, for testing.
auto brute_force_universal(const Constraint & input, std::size_t alphabet_size, std::size_t max_alphabet = 6, std::uint32_t max_arity = 4) -> Constraint;

}
