#pragma once

// Independent, slow reference implementations used only by the tests.

#include <refp/diagram.hpp>
#include <refp/problem.hpp>

#include <optional>
#include <set>

#include <vector>

namespace oracle {

// Tries every permutation of expanded slots.
auto dominates_by_permutation(const refp::Configuration & big, const refp::Configuration & small) -> bool;

// Enumerates node lines and every edge multiset directly.
auto zero_round(const refp::Problem & p) -> bool;

// Tries every bijection of the alphabet.
auto renamable(const refp::Problem & a, const refp::Problem & b) -> bool;

auto parse(const char * text) -> refp::Problem;

// Every subset of {0..n-1} closed under reach[a][b].
auto right_closed(const std::vector<std::vector<bool>> & reach) -> std::set<std::vector<refp::LabelId>>;

// The common successor whose own successors cover all common successors.
auto least_common_successor(const refp::Diagram & d, refp::LabelId a, refp::LabelId b) -> std::optional<refp::LabelId>;
auto greatest_common_predecessor(const refp::Diagram & d, refp::LabelId a, refp::LabelId b) -> std::optional<refp::LabelId>;

// Closure under every matching and union slot, then maximal lines under
// slotwise reachability tried over all permutations.
auto fp_closure(const std::vector<refp::Concrete> & lines, const refp::Diagram & d) -> std::set<refp::Concrete>;

}
