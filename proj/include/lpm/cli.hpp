#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace lpm::cli {

enum ExitCode : int {
    kOk = 0,
    kTypeFailure = 1,
    kParseFailure = 2,  // also I/O and usage errors
    kOutsideFragment = 3,
    kBudgetExceeded = 4,
    kInternal = 5,
};

/// Runs one `lpm` invocation. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lpm::cli
