#pragma once

#include <charconv>
#include <compare>
#include <numeric>
#include <string>
#include <string_view>

#include "wpn/arith.hpp"
#include "wpn/error.hpp"

namespace wpn {

/// Nonnegative fraction in lowest terms, den >= 1.
struct Fraction {
  u64 num = 0;
  u64 den = 1;

  static Fraction make(u64 num, u64 den) {
    if (den == 0) fail(ErrorKind::invalid_argument, "fraction with zero denominator");
    u64 g = std::gcd(num, den);
    if (g == 0) g = 1;
    return Fraction{num / g, den / g};
  }

  bool is_integer() const noexcept { return den == 1; }
  long double to_long_double() const noexcept {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }
  double to_double() const noexcept { return static_cast<double>(to_long_double()); }

  std::string to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend std::strong_ordering operator<=>(const Fraction& x, const Fraction& y) {
    return compare_products(x.num, y.den, y.num, x.den);
  }
};

namespace detail {

inline u64 parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) fail(ErrorKind::invalid_argument, "malformed number: '" + std::string(whole) + "'");
  u64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range)
    fail(ErrorKind::invalid_argument, "number too large: '" + std::string(whole) + "'");
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::invalid_argument, "malformed number: '" + std::string(whole) + "'");
  return v;
}

}  // namespace detail

/// Parses "p/q", an integer, or a plain decimal such as "0.3" into an exact
/// fraction. Decimals are converted exactly (0.3 -> 3/10), never rounded.
inline Fraction parse_fraction(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    u64 p = detail::parse_digits(text.substr(0, slash), text);
    u64 q = detail::parse_digits(text.substr(slash + 1), text);
    return Fraction::make(p, q);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Fraction{detail::parse_digits(text, text), 1};
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = text.substr(dot + 1);
  if (frac_part.size() > 18)
    fail(ErrorKind::invalid_argument, "too many decimal places: '" + std::string(text) + "'");
  u64 scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  u64 whole = int_part.empty() ? 0 : detail::parse_digits(int_part, text);
  u64 fractional = frac_part.empty() ? 0 : detail::parse_digits(frac_part, text);
  if (int_part.empty() && frac_part.empty())
    fail(ErrorKind::invalid_argument, "malformed number: '" + std::string(text) + "'");
  u64 num;
  if (__builtin_mul_overflow(whole, scale, &num) || __builtin_add_overflow(num, fractional, &num))
    fail(ErrorKind::invalid_argument, "number too large: '" + std::string(text) + "'");
  return Fraction::make(num, scale);
}

inline i64 parse_integer(std::string_view text) {
  i64 v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    fail(ErrorKind::invalid_argument, "malformed integer: '" + std::string(text) + "'");
  return v;
}

/// Target ratio a/b with gcd(a, b) = 1 and a > b >= 1.
class RationalTarget {
 public:
  static RationalTarget make(u64 a, u64 b) {
    if (b == 0) fail(ErrorKind::invalid_argument, "target denominator must be positive");
    if (std::gcd(a, b) != 1)
      fail(ErrorKind::invalid_argument,
           "target " + std::to_string(a) + "/" + std::to_string(b) + " is not in lowest terms");
    if (a <= b) fail(ErrorKind::invalid_argument, "target ratio must exceed 1");
    return RationalTarget(a, b);
  }

  static RationalTarget from(Fraction f) { return make(f.num, f.den); }
  static RationalTarget parse(std::string_view text) { return from(parse_fraction(text)); }

  u64 a() const noexcept { return a_; }
  u64 b() const noexcept { return b_; }
  Fraction as_fraction() const noexcept { return Fraction{a_, b_}; }
  long double value() const noexcept {
    return static_cast<long double>(a_) / static_cast<long double>(b_);
  }
  std::string to_string() const { return as_fraction().to_string(); }

  /// |b*sigma - a*n|, the deviation after clearing the denominator.
  u128 deviation(u64 n, u64 sigma_n) const noexcept {
    u128 lhs = static_cast<u128>(b_) * sigma_n;
    u128 rhs = static_cast<u128>(a_) * n;
    return lhs > rhs ? lhs - rhs : rhs - lhs;
  }

  bool is_perfect(u64 n, u64 sigma_n) const noexcept {
    return static_cast<u128>(b_) * sigma_n == static_cast<u128>(a_) * n;
  }

  friend bool operator==(const RationalTarget&, const RationalTarget&) = default;

 private:
  RationalTarget(u64 a, u64 b) : a_(a), b_(b) {}
  u64 a_;
  u64 b_;
};

}  // namespace wpn
