#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "fuzzyfp/config.hpp"
#include "fuzzyfp/report.hpp"

namespace fuzzyfp {

inline constexpr std::array<std::string_view, 8> kCommands{
    "axioms", "psi-check", "verify", "pairs", "fixpoint", "theorem", "dp-solve", "reproduce-example6"};

struct CommandOptions {
    std::string command;
    /// Required by every command except reproduce-example6, which falls
    /// back to the bundled worked-example config.
    std::optional<std::string> config;
    Overrides overrides;
};

struct CommandResult {
    /// 0 all checks pass, 1 a violation or witness was found, 2 input or
    /// numerical error.
    int exit_code = 0;
    Json report;
    /// dp-solve only: "x,value" rows of the U1 solution.
    std::optional<std::string> csv;
};

/// Never throws for input or numerical problems; they become exit code 2
/// with an error envelope.
CommandResult run_command(const CommandOptions& opts);

/// Text of the bundled worked-example config.
std::string_view example6_config();

}  // namespace fuzzyfp
