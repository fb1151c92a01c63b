#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opm {

/// Exit codes: 0 pass, 1 axiom failure, 2 invalid model or usage, 3 I/O or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opm
