#ifndef PTOPK_ERRORS_HPP
#define PTOPK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptopk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precondition failures, one type per contract so callers can dispatch.
struct MissingScoreError : Error {
  using Error::Error;
};
struct NotSimpleError : Error {
  using Error::Error;
};
struct NotInjectiveError : Error {
  using Error::Error;
};
struct TooLargeError : Error {
  using Error::Error;
};
struct IndexOutOfRangeError : Error {
  using Error::Error;
};
struct InvalidPerturbationError : Error {
  using Error::Error;
};
struct StatsMismatchError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line(line),
        reason(reason) {}
  std::size_t line;
  std::string reason;
};

struct ValidationError : Error {
  using Error::Error;
};

}  // namespace ptopk

#endif
