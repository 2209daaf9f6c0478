#pragma once

#include <iosfwd>

namespace lhvsim {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the `lhvsim` tool. Subcommands: qm, run, scan, demo.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lhvsim
