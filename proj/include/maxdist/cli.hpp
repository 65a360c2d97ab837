#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxdist {

// Command-line entry point, testable in-process. Returns the process exit
// code: 0 success, 2 validation error, 1 runtime failure. Diagnostics go to
// err only; out carries the report (pure JSON when --json is given).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxdist
