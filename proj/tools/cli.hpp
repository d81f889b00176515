#pragma once

// Command-line front end, callable in-process so tests can drive it.

#include <iosfwd>
#include <string>
#include <vector>

namespace min2lin::cli {

/// args excludes the program name. Returns the process exit code:
/// 0 ok, 1 no_solution / failed verification / failed check, 2 usage or input error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace min2lin::cli
