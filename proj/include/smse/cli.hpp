#pragma once

#include <iosfwd>

namespace smse {

/// Command-line entry point. Exit codes: 0 success, 1 usage or data error,
/// 2 estimability failure (nonexistent or unidentifiable).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smse
