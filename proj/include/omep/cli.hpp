#pragma once

namespace omep::cli {

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 2 invalid input, 3 infeasible constraints, 4 numeric
/// failure.
int run(int argc, const char* const* argv);

}  // namespace omep::cli
