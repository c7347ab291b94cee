#pragma once

#include <stdexcept>
#include <string>

namespace khier {

enum class ErrorCode {
  ParseError,
  InvalidStructure,  // malformed system, dimension mismatch, INVALID_TAILS
  NumericallyAmbiguous,
  NotPartiallyStrict,
  ScaleTooSmall,
  VerificationFail,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace khier
