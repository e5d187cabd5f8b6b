#pragma once

#include <stdexcept>
#include <string>

namespace fdsec {

enum class ErrorCode {
  InvalidArgument,
  Singular,
  NotConverged,
  NotPsd,
  Factorization,
  Unavailable,
  Parse,
  Io,
};

// Every failure raised by the core library. The C layer maps `code()` onto
// its status enum, so new codes must be added there as well.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace fdsec
