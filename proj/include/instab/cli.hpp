#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace instab::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNumerical = 3 };

/// Runs one subcommand. `args` excludes the program name. Normal output goes
/// to `out` (or the --output file), single-line diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf "%.17g", the form written to CSV.
std::string format_double(double v);

/// Worker count for sweeps: INSTAB_THREADS if set to a positive integer,
/// else the hardware concurrency, never more than `jobs`.
unsigned sweep_threads(std::size_t jobs);

}  // namespace instab::cli
