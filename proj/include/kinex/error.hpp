#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kinex {

enum class ErrorCode {
  Parse,
  InsufficientData,
  Degenerate,
  Domain,
  Numeric,
  Io,
  Usage,
};

// Machine-parsable prefix, e.g. "E_PARSE".
std::string_view error_tag(ErrorCode code) noexcept;

// Process exit status used by the command-line tool for each error class.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kinex
