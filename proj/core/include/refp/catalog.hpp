#pragma once

#include <refp/diagram.hpp>
#include <refp/problem.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace refp::catalog {

enum class Family { sinkless_orientation, c_coloring, delta_coloring_fp, def2col_fp, def3col_fp };

auto to_string(Family f) -> std::string;
auto parse_family(const std::string & s) -> Family;
auto families() -> std::vector<Family>;

struct Key {
    Family family = Family::sinkless_orientation;
    std::uint32_t delta = 3;
    std::uint32_t colors = 3;  // c-coloring only

    // d = floor((delta - 3) / 2), used by def3col-fp
    auto defect() const -> std::uint32_t { return delta >= 3 ? (delta - 3) / 2 : 0; }
};

auto to_string(const Key & k) -> std::string;

// Throws Error when the parameters are out of range for the family.
void check_range(const Key & k);
auto has_diagram(Family f) -> bool;

// Node lines dominated by another line under the family diagram are dropped;
// generate_raw keeps every line of the family definition.
auto generate(const Key & k) -> Problem;
auto generate_raw(const Key & k) -> Problem;
auto generate_diagram(const Key & k) -> Diagram;

// The label-set each def2col/def3col/delta-coloring label stands for, over
// single characters of its name.
auto label_letters(const std::string & name) -> LabelSet;

// Keys used as fixtures by tests and the acceptance run.
auto fixtures() -> std::vector<Key>;

}
