#pragma once

#include <charconv>
#include <string>

namespace selfforce {

/// Decimal form with 17 significant digits, enough to round-trip any double.
/// Negative zero is written as 0.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace selfforce
