#pragma once

#include <stdexcept>
#include <string>

namespace sgl {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidPair,
  kDimensionMismatch,
  kInput,
  kDegenerateDegree,
  kUndefined,
  kIo,
};

// Base exception for every failure raised by the library. The C API maps
// `code()` onto its status enum.
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

}  // namespace sgl
