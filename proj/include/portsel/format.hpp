#pragma once

#include <charconv>
#include <string>

namespace portsel {

/// Shortest-safe, locale-independent rendering at 17 significant digits.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

/// Shortest representation that round-trips.
inline std::string format_short(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

/// Fixed-point rendering for human-facing summaries.
inline std::string format_fixed(double v, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

}  // namespace portsel
