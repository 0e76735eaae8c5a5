#include "tdchan/error.hpp"

namespace tdchan {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::BadDimension: return "BadDimension";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::BadTrace: return "BadTrace";
    case Errc::NotPSD: return "NotPSD";
    case Errc::NotProbability: return "NotProbability";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::SumMismatch: return "SumMismatch";
    case Errc::IndexError: return "IndexError";
    case Errc::BadK: return "BadK";
    case Errc::ZeroT: return "ZeroT";
    case Errc::BadT: return "BadT";
    case Errc::BadLength: return "BadLength";
    case Errc::BadSignPattern: return "BadSignPattern";
    case Errc::NearZeroNu: return "NearZeroNu";
    case Errc::ConfigError: return "ConfigError";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace tdchan
