#include "omin/error.hpp"

namespace omin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NotPowerOfTwo:
    return "NotPowerOfTwo";
  case ErrorCode::UnknownTopology:
    return "UnknownTopology";
  case ErrorCode::OutOfRange:
    return "OutOfRange";
  case ErrorCode::UnsupportedTopology:
    return "UnsupportedTopology";
  case ErrorCode::ParseError:
    return "ParseError";
  case ErrorCode::DuplicateSource:
    return "DuplicateSource";
  case ErrorCode::DuplicateDestination:
    return "DuplicateDestination";
  case ErrorCode::SameSource:
    return "SameSource";
  case ErrorCode::TooLarge:
    return "TooLarge";
  case ErrorCode::IndexOutOfRange:
    return "IndexOutOfRange";
  case ErrorCode::CoverageError:
    return "CoverageError";
  case ErrorCode::ZeroTrials:
    return "ZeroTrials";
  }
  return "Unknown";
}

} // namespace omin
