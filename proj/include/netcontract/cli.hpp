/**
 * @file cli.hpp
 * @brief In-process command-line driver. The binary is a thin wrapper around
 *        run_cli so every command, payload, and exit path is testable without
 *        spawning a process.
 */
#pragma once

#include <string>
#include <vector>

namespace netcontract {

/// Outcome of one CLI invocation. Exit codes: 0 ok, 2 validation/usage,
/// 3 assumption violation, 4 numeric failure, 5 internal-consistency failure.
/// Every non-zero exit carries a single structured JSON error object in err.
struct CommandResult {
    int exit_code = 0;
    std::string out;  ///< payload: JSON document or CSV stream
    std::string err;
};

/// Runs one command. `args` excludes the program name, e.g.
/// {"solve", "model.json", "--format", "csv"}.
CommandResult run_cli(const std::vector<std::string>& args);

}  // namespace netcontract
