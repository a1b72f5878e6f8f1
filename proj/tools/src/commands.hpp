#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace topograd::cli {

/// Runs the command line `argv` (argv[0] is the program name). Returns the
/// process exit code: 0 on success, 1 on input or runtime failures, and the
/// argument parser's code on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Oracle self-checks; returns true when every suite passes.
bool run_selftest(int trials, std::uint64_t seed, std::ostream& out);

}  // namespace topograd::cli
