#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdtm::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadInput = 2 };

/// Runs the `fdtm` command line. args[0] is the program name. The result
/// payload goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdtm::cli
