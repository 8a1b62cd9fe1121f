#pragma once

// Command-line front end. Subcommands: count, construct, sample, verify,
// janson, replay. Every file-producing run also writes run.json next to its
// outputs; `replay` re-executes such a manifest into a new directory.

#include <ostream>
#include <string>
#include <vector>

namespace rpart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInvariant = 3;

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpart::cli
