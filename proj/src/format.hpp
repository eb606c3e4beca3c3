#pragma once

#include <string>

namespace palm {

/// Formats a finite double with 17 significant digits, enough to parse back
/// to the identical binary64 value. All CSV and JSON output goes through
/// this so round trips are exact.
std::string format_double(double value);

/// Escapes a string for embedding in a JSON string literal (without the
/// surrounding quotes).
std::string json_escape(const std::string& text);

}  // namespace palm
