#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace dkscale {

/// Exact rational number. All rescaling, distribution values and deviation
/// bounds are computed in this type; floating point only appears when a
/// value is rendered for output.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using Count = std::int64_t;

inline Rational make_rational(Count num, Count den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt floor_of(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);  // truncates toward zero
  if (x < 0 && q * denominator(x) != numerator(x)) q -= 1;
  return q;
}

inline BigInt ceil_of(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (x > 0 && q * denominator(x) != numerator(x)) q += 1;
  return q;
}

/// Round half away from zero.
inline BigInt round_of(const Rational& x) {
  Rational half = make_rational(1, 2);
  return x >= 0 ? floor_of(x + half) : ceil_of(x - half);
}

inline Count to_count(const BigInt& v) {
  if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN))
    throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<Count>(v);
}

inline double to_double(const Rational& x) {
  return static_cast<double>(x);
}

/// Rounds to 12 significant digits, the precision used for every rendered
/// value in reports.
inline double rendered(const Rational& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", to_double(x));
  return std::strtod(buf, nullptr);
}

/// Canonical "p/q" (or "p" when integral) text form.
inline std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

namespace detail {

inline BigInt parse_unsigned_digits(std::string_view digits, std::string_view whole) {
  if (digits.empty())
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  BigInt v = 0;
  for (char c : digits) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace detail

/// Parses "p/q", "2.5", "3" exactly. Decimal text is converted as a decimal
/// fraction, never through a double.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_unsigned_digits(s.substr(0, slash), text);
    BigInt den = detail::parse_unsigned_digits(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    value = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
      throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    BigInt whole = int_part.empty() ? BigInt(0) : detail::parse_unsigned_digits(int_part, text);
    BigInt frac = frac_part.empty() ? BigInt(0) : detail::parse_unsigned_digits(frac_part, text);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    value = Rational(whole * scale + frac, scale);
  } else {
    value = Rational(detail::parse_unsigned_digits(s, text));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace dkscale
