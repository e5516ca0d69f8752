#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liftctl {

/// Exit codes: 0 success, 1 validation or usage error, 2 verify failures.
/// args excludes the program name.  Results go to `out` unless --out names a file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liftctl
