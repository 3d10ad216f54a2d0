#pragma once

#include <charconv>
#include <string>

namespace mixbound {

/// Shortest round-trip decimal form; identical bits always print identically.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace mixbound
