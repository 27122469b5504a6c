#pragma once

#include <refp/diagram.hpp>
#include <refp/fm.hpp>
#include <refp/linexpr.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace refp::lincheck {

struct ParamPart {
    std::string label;
    LinExpr exp;
};

// One row of a parametric node constraint.
struct ParamLine {
    std::string id;
    std::vector<ParamPart> parts;
    std::vector<Inequality> side;
    std::optional<std::string> free_var;

    auto total() const -> LinExpr;
    auto rename(const std::string & from, const std::string & to) const -> ParamLine;
    // Concrete multiplicities for the given values; nullopt when a side
    // constraint fails or an exponent is negative.
    auto instantiate(const std::map<std::string, std::int64_t> & values) const
        -> std::optional<std::vector<std::pair<std::string, std::int64_t>>>;
};

auto to_string(const ParamLine & l) -> std::string;
auto param_line_to_json(const ParamLine & l) -> nlohmann::json;
auto param_line_from_json(const nlohmann::json & j) -> ParamLine;

using LineCatalog = std::map<std::string, ParamLine>;

// Lines of the defective 3-coloring family, ids "<case>.<row>", free variable "j".
auto def3col_lines() -> LineCatalog;
// 1 <= d, 2d + 3 <= Delta <= 2d + 4, Delta >= 5
auto def3col_assumptions() -> std::vector<Inequality>;
auto def3col_diagram() -> Diagram;

// Subsets of t's labels closed under successors inside t, ordered by size and
// then by the positions of their labels in t.
auto right_closed_cuts(const ParamLine & t, const Diagram & d) -> std::vector<LabelSet>;

// X(R) <= T(R) for every right-closed cut R of t; trivially true ones are dropped.
auto hall_inequalities(const ParamLine & c, const ParamLine & t, const Diagram & d) -> std::vector<Inequality>;

struct CombinedLine {
    ParamLine line;
    std::vector<Inequality> constraints;  // nonnegativity, row and column sums
    std::vector<std::string> x_vars;
};

// The sup part comes first, then x_i_j for every (i, j) in row-major order.
auto build_combined_line(const ParamLine & l1, const ParamLine & l2, const std::pair<std::string, std::string> & sup_pair,
                         const Diagram & d) -> CombinedLine;

struct Target {
    std::string line;
    std::optional<LinExpr> expr;  // value of k_i, over Delta, d, f1, f2 and x_i_j
};

struct PsiEntry {
    std::string name;
    std::string l1, l2;
    std::pair<std::string, std::string> sup;
    std::vector<Target> targets;
};

struct Systems {
    CombinedLine combined;
    std::vector<Inequality> base;               // A
    std::vector<std::vector<Inequality>> p;     // P_i per target
    std::vector<IneqSystem> systems;            // one per choice, last target fastest
};

auto build_systems(const PsiEntry & entry, const std::vector<Inequality> & global, const LineCatalog & lines,
                   const Diagram & d) -> Systems;

struct EntryReport {
    std::string name;
    bool valid = false;
    std::optional<std::size_t> first_feasible;
    Systems built;
    std::vector<FmResult> results;
};

auto verify_entry(const PsiEntry & entry, const std::vector<Inequality> & global, const LineCatalog & lines,
                  const Diagram & d, const FmOptions & opts = {}) -> EntryReport;

struct PsiLedger {
    std::string problem;
    std::vector<Inequality> assumptions;
    LineCatalog lines;
    Diagram diagram;
    std::vector<PsiEntry> entries;
};

// Resolves "problem" to its line catalog; extra "lines" in the ledger are added to it.
auto ledger_from_json(const nlohmann::json & j) -> PsiLedger;
auto entry_to_json(const PsiEntry & e) -> nlohmann::json;
auto report_to_json(const EntryReport & r) -> nlohmann::json;
auto format_report(const EntryReport & r) -> std::string;

}
