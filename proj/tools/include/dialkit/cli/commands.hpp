#pragma once

#include <ostream>
#include <span>
#include <string>

namespace dialkit::cli {

// Exit codes: 0 success, 1 fatal config/IO failure, 2 validation failures.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitValidation = 2;

// Runs one subcommand (ingest, profile, split, score, report, sample).
// args excludes the program name. Human-readable progress goes to `out`;
// errors go to `err` as one JSON object per line.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dialkit::cli
