#ifndef OMIN_ERROR_HPP_INCLUDED
#define OMIN_ERROR_HPP_INCLUDED

#include <stdexcept>
#include <string>
#include <string_view>

namespace omin {

enum class ErrorCode {
  NotPowerOfTwo,
  UnknownTopology,
  OutOfRange,
  UnsupportedTopology,
  ParseError,
  DuplicateSource,
  DuplicateDestination,
  SameSource,
  TooLarge,
  IndexOutOfRange,
  CoverageError,
  ZeroTrials,
};

std::string_view to_string(ErrorCode code);

// Every recoverable input error raised by the library. The CLI maps these to
// exit status 2.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Raised when an internal postcondition does not hold (exit status 1).
class InvariantFailure : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace omin

#endif // OMIN_ERROR_HPP_INCLUDED
