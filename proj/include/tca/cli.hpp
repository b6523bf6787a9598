#pragma once

#include <exception>
#include <iosfwd>

namespace tca {

// Exit codes: 0 success (whatever the verdict), 1 input error, 2 resource
// error, 3 internal error.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitResource = 2, kExitInternal = 3 };

// Exit code for an exception escaping a command. Library errors are input or
// resource errors by kind; anything else is internal.
int exit_code(const std::exception& e);

// Entry point for the `tca` command. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tca
