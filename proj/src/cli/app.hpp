#pragma once

#include <iosfwd>

namespace inflation::cli {

/// Entry point behind the `inflation` executable. Returns the process exit
/// code: 0 success, 2 rejected input, 3 numerical failure or failed --check.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace inflation::cli
