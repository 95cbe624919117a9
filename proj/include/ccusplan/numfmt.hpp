#pragma once

#include <charconv>
#include <string>

namespace ccusplan {

// Shortest decimal form that round-trips the exact double. All file emitters
// use this, so identical inputs give byte-identical files.
inline std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

} // namespace ccusplan
