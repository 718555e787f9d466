#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sialign {

/// Stable, machine-readable failure categories. The string form is what
/// appears in CLI output and HTTP error bodies.
enum class ErrorCode {
  ParseError,
  MalformedDocument,
  UnknownLabel,
  UnknownStrength,
  IndexOutOfRange,
  DuplicateId,
  InvalidArgument,
  SizeMismatch,
  IncompleteAnnotation,
  OneSided,
  NonFinite,
  Io,
  NotFound,
  Conflict,
  Rejected,
  Internal,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::MalformedDocument: return "MALFORMED_DOCUMENT";
    case ErrorCode::UnknownLabel: return "UNKNOWN_LABEL";
    case ErrorCode::UnknownStrength: return "UNKNOWN_STRENGTH";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::DuplicateId: return "DUPLICATE_ID";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::SizeMismatch: return "SIZE_MISMATCH";
    case ErrorCode::IncompleteAnnotation: return "INCOMPLETE_ANNOTATION";
    case ErrorCode::OneSided: return "ONE_SIDED";
    case ErrorCode::NonFinite: return "NON_FINITE";
    case ErrorCode::Io: return "IO_ERROR";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::Conflict: return "CONFLICT";
    case ErrorCode::Rejected: return "REJECTED";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sialign
