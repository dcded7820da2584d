#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace adjstress {

using NodeId = std::uint32_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (Matrix Market, layout files, record files).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Iterative numerical routine failed to converge.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

namespace detail {

inline bool& quiet_flag() {
  static bool quiet = false;
  return quiet;
}

} // namespace detail

/// Silences warn() output; tests use it to keep logs readable.
inline void set_quiet(bool quiet) { detail::quiet_flag() = quiet; }

inline void warn(std::string_view msg) {
  if (!detail::quiet_flag())
    std::cerr << "adjstress: warning: " << msg << '\n';
}

/// Formats a double with `digits` significant digits using the
/// locale-independent, correctly rounded std::to_chars.
inline std::string format_double(double v, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

/// Shortest representation that parses back to the same double.
inline std::string format_double_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto first = s.data();
  auto last = s.data() + s.size();
  if (first != last && *first == '+')
    ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ParseError("not a number: '" + std::string(s) + "'");
  return v;
}

} // namespace adjstress
