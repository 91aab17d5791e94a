#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace sbci {

// Shortest decimal form that round-trips the exact double. Locale-free,
// so emitted files are byte-stable across runs and machines.
inline std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view text, double& out) {
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

}  // namespace sbci
