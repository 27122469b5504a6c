#pragma once

#include <refp/catalog.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace refp::cli {

// 0 success or verified, 1 checked and false, 2 usage or input error, 3 budget or undecided
enum Exit : int { ok = 0, no = 1, usage = 2, budget = 3 };

struct CommandResult {
    int exit = ok;
    nlohmann::json payload;
    std::string text;
};

using Progress = std::function<void(const std::string &)>;

enum class StepKind { re, rere, full };

// Inputs are file contents; problems and diagrams may be text or their JSON mirrors.
auto cmd_parse(const std::string & problem) -> CommandResult;
auto cmd_step(const std::string & problem, StepKind kind, bool rename, const Progress & progress = {}) -> CommandResult;

struct FixedpointArgs {
    std::string problem;
    std::optional<std::string> diagram;  // default diagram when absent
    bool prune = false;
    bool provenance = false;
};

auto cmd_fixedpoint(const FixedpointArgs & a, const Progress & progress = {}) -> CommandResult;
auto cmd_check_trivial(const std::string & problem) -> CommandResult;
auto cmd_is_fixedpoint(const std::string & problem, const Progress & progress = {}) -> CommandResult;
auto cmd_default_diagram(const std::string & problem) -> CommandResult;
auto cmd_validate_diagram(const std::string & diagram) -> CommandResult;
// `provenance` is the file written by fixedpoint --provenance; `line` uses diagram names.
auto cmd_trace(const std::string & provenance, const std::string & line) -> CommandResult;
auto cmd_verify_psi(const std::string & ledger, std::optional<std::size_t> entry) -> CommandResult;
auto cmd_catalog_list() -> CommandResult;
auto cmd_catalog_emit(const catalog::Key & key, bool diagram, bool raw) -> CommandResult;

// Runs f, mapping parse and input errors to exit 2 and budget errors to exit 3.
auto guarded(const std::function<CommandResult()> & f) -> CommandResult;

auto read_file(const std::string & path) -> std::string;

}
