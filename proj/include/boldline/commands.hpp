#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace boldline::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;

/// Runs one command line (without the program name): build-corpus, evaluate,
/// report or fixtures record. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boldline::cli
