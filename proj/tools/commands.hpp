#pragma once

#include <iosfwd>

namespace mfgn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Parses the command line, runs one subcommand and returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfgn::cli
