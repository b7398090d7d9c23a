#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellbound::cli {

enum ExitCode : int {
    kSuccess = 0,
    kDomainError = 2,
    kBudgetError = 3,
    kVerificationFailure = 4,
};

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellbound::cli
