#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tdchan {

enum class Errc {
  OutOfRange,
  BadDimension,
  DimensionMismatch,
  NotHermitian,
  BadTrace,
  NotPSD,
  NotProbability,
  ConvergenceFailure,
  LengthMismatch,
  SumMismatch,
  IndexError,
  BadK,
  ZeroT,
  BadT,
  BadLength,
  BadSignPattern,
  NearZeroNu,
  ConfigError,
  ParseError,
};

std::string_view to_string(Errc code) noexcept;

// Validation failures are reported with a code so that callers (notably the
// CLI) can map them onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tdchan
