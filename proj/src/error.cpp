#include "kinex/error.hpp"

namespace kinex {

std::string_view error_tag(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "E_PARSE";
    case ErrorCode::InsufficientData: return "E_INSUFFICIENT_DATA";
    case ErrorCode::Degenerate: return "E_DEGENERATE";
    case ErrorCode::Domain: return "E_DOMAIN";
    case ErrorCode::Numeric: return "E_NUMERIC";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Usage: return "E_USAGE";
  }
  return "E_UNKNOWN";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Usage: return 2;
    case ErrorCode::Parse: return 3;
    case ErrorCode::InsufficientData: return 4;
    case ErrorCode::Degenerate: return 5;
    case ErrorCode::Domain: return 6;
    case ErrorCode::Numeric: return 7;
    case ErrorCode::Io: return 8;
  }
  return 1;
}

}  // namespace kinex
