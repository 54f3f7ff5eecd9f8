#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <system_error>

#include "mei/core/error.hpp"

namespace mei::io {

inline constexpr int kSignificantDigits = 9;

/// Shortest form that reproduces the value rounded to 9 significant digits.
/// Negative zero prints as "0".
inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw InvalidInput("cannot format a non-finite number");
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  const double rounded = std::strtod(buf, nullptr);
  const auto r = std::to_chars(buf, buf + sizeof buf, rounded);
  return std::string(buf, r.ptr);
}

/// Shortest round-trip form of the exact value.
inline std::string format_exact(double v) {
  if (!std::isfinite(v)) throw InvalidInput("cannot format a non-finite number");
  if (v == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Fixed two-decimal form, half away from zero, applied to the value first
/// rounded to 9 significant digits (so 1.005 prints "1.01").
inline std::string format_fixed2(double v) {
  if (!std::isfinite(v)) throw InvalidInput("cannot format a non-finite number");
  const bool negative = v < 0.0;
  const double a = std::abs(v);
  int decimals = 2;
  if (a > 0.0) {
    const int exponent = static_cast<int>(std::floor(std::log10(a)));
    decimals = std::max(2, kSignificantDigits - 1 - exponent);
  }
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, a);
  std::string s(buf);
  const std::size_t dot = s.find('.');
  std::string whole = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  const bool up = frac.size() > 2 && frac[2] >= '5';
  std::string digits = whole + frac.substr(0, 2);
  if (up) {
    bool carry = true;
    for (std::size_t i = digits.size(); i > 0 && carry; --i) {
      if (digits[i - 1] == '9') {
        digits[i - 1] = '0';
      } else {
        ++digits[i - 1];
        carry = false;
      }
    }
    if (carry) digits.insert(digits.begin(), '1');
  }
  const std::string out = digits.substr(0, digits.size() - 2) + "." + digits.substr(digits.size() - 2);
  if (out == "0.00") return out;
  return negative ? "-" + out : out;
}

/// Strict decimal parse of a whole token.
inline bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  const auto r = std::from_chars(first, last, out);
  return r.ec == std::errc() && r.ptr == last && std::isfinite(out);
}

}  // namespace mei::io
