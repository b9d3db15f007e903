#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace todaflow::cli {

enum ExitCode : int { ok = 0, numerical_failure = 1, usage_error = 2, domain_error = 3 };

/// Entry point of the command-line tool. `args` excludes the program name.
/// Data goes to --out (or `out` for "-"); key=value summaries go to `out`
/// unless the data itself is on `out`, in which case they go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Oracle checks behind the hidden --selftest flag. Returns the number of
/// failed checks.
int selftest(std::ostream& log);

}  // namespace todaflow::cli
