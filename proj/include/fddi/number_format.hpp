#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "fddi/error.hpp"

namespace fddi {

// Shortest representation that parses back to the same double. Plain
// decimal notation for everyday magnitudes.
inline std::string format_double(double v) {
  char buf[64];
  const double mag = v < 0 ? -v : v;
  const bool plain = mag == 0 || (mag >= 1e-4 && mag < 1e15);
  auto [end, ec] = plain ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_fixed(double v, int precision) {
  char buf[128];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error("BadNumber", "'" + std::string(s) + "' is not a number");
  return v;
}

}  // namespace fddi
