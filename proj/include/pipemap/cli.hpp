#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pipemap::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kUsageError = 1,
  kInfeasible = 2,
  kValidationError = 3,
  kLimitsExceeded = 4,
};

// Runs one command line (args[0] is the program name). The report goes to
// `out`, diagnostics to `err`.
//
//   classify <file>
//   evaluate <file>
//   solve <file> --objective fp|latency [--max-latency L] [--max-fp F]
//         [--force-exact]
//   pareto <file> [--csv out.csv]
//   general-latency <file> [--dump-graph graph.txt]
//   simulate <file> --trials T --seed S [--threads N]
//
// solve and pareto accept --max-stages, --max-processors, --max-candidates
// and --max-intervals to adjust the exhaustive search limits.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pipemap::cli
