#pragma once

// Exact arithmetic vocabulary shared by the whole library.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bhc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline BigInt numerator_of(const Rational& r) {
  return boost::multiprecision::numerator(r);
}
inline BigInt denominator_of(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline BigInt ipow(const BigInt& base, int exponent) {
  if (exponent < 0) throw InvalidArgument("ipow: negative exponent");
  return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::lcm(a, b);
}

inline bool fits_int64(const BigInt& v) {
  return v <= std::numeric_limits<std::int64_t>::max() &&
         v >= std::numeric_limits<std::int64_t>::min();
}

// Parses "12", "-3", "0.125", "7/16" (and "1.5/2") into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  };
  auto parse_decimal = [](std::string_view s) -> Rational {
    if (s.empty()) throw InvalidArgument("empty number");
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    BigInt digits = 0;
    BigInt scale = 1;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : s) {
      if (c == '.') {
        if (seen_point) throw InvalidArgument("malformed number: two decimal points");
        seen_point = true;
      } else if (c >= '0' && c <= '9') {
        digits = digits * 10 + (c - '0');
        if (seen_point) scale *= 10;
        seen_digit = true;
      } else {
        throw InvalidArgument(std::string("malformed number: unexpected '") + c + "'");
      }
    }
    if (!seen_digit) throw InvalidArgument("malformed number: no digits");
    Rational r(digits, scale);
    return negative ? Rational(-r) : r;
  };

  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(trim(text.substr(0, slash)));
  Rational den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0) throw InvalidArgument("malformed number: zero denominator");
  return num / den;
}

// Always "a/b" with b >= 1, so that reports are uniform and diffable.
inline std::string to_fraction_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

// Truncated decimal rendering with a fixed number of fractional digits.
inline std::string to_decimal_string(const Rational& r, int digits = 12) {
  BigInt num = numerator_of(r);
  const BigInt den = denominator_of(r);
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  const BigInt scaled = num * ipow(BigInt(10), digits) / den;
  std::string body = scaled.str();
  if (static_cast<int>(body.size()) <= digits)
    body.insert(0, static_cast<std::size_t>(digits + 1) - body.size(), '0');
  if (digits > 0) body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  return sign + body;
}

}  // namespace bhc
