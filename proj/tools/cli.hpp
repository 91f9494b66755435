#pragma once

#include <iosfwd>

namespace kwlab::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalid = 2, kSizeGuard = 3 };

// Parses argv (argv[0] is the program name), writes one JSON document to `out`
// and returns the exit code. A graph path of "-" reads from `in`.
int run(int argc, const char* const* argv, std::ostream& out, std::istream& in);

}  // namespace kwlab::cli
