#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ewh::cli {

enum ExitCode { exit_yes = 0, exit_no = 1, exit_usage = 2, exit_guard = 3 };

// Runs one `ewh` invocation; args excludes the program name. Reports go to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace ewh::cli
