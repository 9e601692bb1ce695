#pragma once

#include <stdexcept>
#include <string>

namespace torusnav {

enum class ErrorCode {
  Config = 1,
  Saturation,
  Degenerate,
  NoBump,
  Calibration,
  Parse,
  Io,
  LengthMismatch,
};

const char* to_string(ErrorCode code) noexcept;

// Every module reports failures through this exception; the C API maps
// `code()` onto tn_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace torusnav
