#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace annuli::cli {

inline constexpr const char* kFormatVersion = "annuli-format 1";

enum ExitCode
{
    kSuccess = 0,
    kValidationError = 2,
    kToleranceFailure = 3,
};

/*!
 * Run the experiment driver on argv without the program name.
 *
 * Results go to `out` (or to the --out file); diagnostics and usage text go
 * to `err`. Returns one of ExitCode.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace annuli::cli
