#pragma once

#include <iosfwd>

namespace qpmsynth::cli {

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 ok, 1 usage, 2 config/parse, 3 numeric/domain, 4 I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpmsynth::cli
