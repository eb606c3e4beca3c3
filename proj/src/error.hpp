#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace palm {

enum class ErrorCode {
  invalid_argument,
  domain,
  parse,
  validation,
  grid_mismatch,
  range,
  too_few_points,
  no_converged_start,
  target_unreachable,
  degenerate_model,
  grid_too_large,
  io,
  json,
};

/// Stable snake_case name for a code ("too_few_points", ...). Used verbatim
/// in CLI error documents.
const char* error_code_name(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }

  /// 1-based input line for parse errors, 0 elsewhere.
  std::size_t line() const noexcept { return line_; }

private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace palm
