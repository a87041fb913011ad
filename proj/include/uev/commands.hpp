#pragma once

#include "uev/game.hpp"
#include "uev/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace uev {

enum ExitCode { kExitPass = 0, kExitIo = 1, kExitInvalid = 2, kExitFail = 3 };

struct RunConfig {
    std::string command;  // validate | check | build | audit | hierarchy
    std::string which;    // sub-command (sm, npd, bne, claims, ...)
    std::string path;
    std::uint64_t seed = 0;
    SearchBudget budget;
    std::uint64_t plan_cap = 1000000;  // pure plans enumerated by bet certification
    std::size_t icr_cap = 256;         // messages per type in an explicit game
    std::string eps = "1/100";         // AM transfer bound
    std::optional<int> rounds;         // AM round count override
    std::optional<int> levels;         // hierarchy depth to dump
    std::string format = "human";      // human | machine
};

struct CommandResult {
    int exit_code = kExitPass;
    json report;  // full document, including the header
};

CommandResult run_command(const RunConfig& cfg);
std::string render(const CommandResult& r, const std::string& format);

}  // namespace uev
