#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace densepix {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kMissingId,
  kDuplicateId,
  kNonArealGeometry,
  kUnknownRegion,
  kMissingRegion,
  kBadValue,
  kNonMonotoneTime,
  kIdMismatch,
  kOutOfRange,
  kUnknownSession,
};

std::string_view to_string(ErrorCode code);

// All recoverable failures in the engine surface as this type; the code is
// what the HTTP layer maps onto a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace densepix
