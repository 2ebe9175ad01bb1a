// commands.hpp — ancilla-sim subcommands: quench, sweep, gs-quench, oracle,
// fit, q-check

#pragma once

#include "ancilla/config.hpp"

#include <ostream>
#include <string>

namespace ancilla::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigFailure = 1;      // bad config, unwritable path
inline constexpr int kInvariantFailure = 2;   // norm/trace/eigensolver failure

// Parses argv and runs the selected subcommand. All console output goes to
// `out` (results) and `err` (diagnostics, progress).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// File stem of one parameter point, e.g. "L8_q40_h2_r0.125".
std::string point_stem(const ModelParams& p);

} // namespace ancilla::cli
