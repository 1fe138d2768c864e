#pragma once

#include <iosfwd>

namespace portsel {

/// Entry point of the command-line tool, writing to the given streams.
/// Returns 0 on success, 1 on data errors, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace portsel
