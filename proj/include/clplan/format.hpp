#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace clplan {

// Locale-independent numeric formatting via std::to_chars, so emitted files
// are byte-stable across platforms.

inline std::string format_sig(double v, int significant = 6) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                                 significant);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

inline std::string format_km(double v) { return format_fixed(v, 1); }

}  // namespace clplan
