#pragma once

#include <iosfwd>

namespace tdchan {

/// Exit statuses shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitUsage = 2,
  kExitValidation = 3,
};

/// Entry point of the tdchan command-line tool. Output is assembled in full
/// before anything is written to `out`, so a failing command leaves `out`
/// untouched.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tdchan
