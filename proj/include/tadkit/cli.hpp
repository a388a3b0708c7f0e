#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tadkit {

// Runs one CLI invocation. Exit status: 0 success, 1 input or validation
// error, 2 internal invariant violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tadkit
