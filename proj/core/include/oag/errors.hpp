#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oag {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpec : Error { using Error::Error; };
struct GroupMismatch : Error { using Error::Error; };
struct NotDivisible : Error { using Error::Error; };
struct ConstraintViolation : Error { using Error::Error; };
struct UnknownConvex : Error { using Error::Error; };
struct NotNested : Error { using Error::Error; };
struct NotElementaryAbelian : Error { using Error::Error; };
struct OracleBoundExceeded : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct MultiplicityExceeded : Error { using Error::Error; };
struct StreamExhausted : Error { using Error::Error; };
struct AmbientTooLarge : Error { using Error::Error; };
struct InadmissibleTarget : Error { using Error::Error; };
struct WrongFamily : Error { using Error::Error; };
struct UnknownLemma : Error { using Error::Error; };
struct IncompatibleFamily : Error { using Error::Error; };

struct ParseError : Error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t at)
      : Error(msg + " (at position " + std::to_string(at) + ")"), pos(at) {}
};

}  // namespace oag
