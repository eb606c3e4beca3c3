#include "error.hpp"

namespace palm {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain: return "domain_error";
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::validation: return "validation_error";
    case ErrorCode::grid_mismatch: return "grid_mismatch";
    case ErrorCode::range: return "range_error";
    case ErrorCode::too_few_points: return "too_few_points";
    case ErrorCode::no_converged_start: return "no_converged_start";
    case ErrorCode::target_unreachable: return "target_unreachable";
    case ErrorCode::degenerate_model: return "degenerate_model";
    case ErrorCode::grid_too_large: return "grid_too_large";
    case ErrorCode::io: return "io_error";
    case ErrorCode::json: return "json_error";
  }
  return "unknown_error";
}

}  // namespace palm
