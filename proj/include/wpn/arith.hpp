#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "wpn/error.hpp"

namespace wpn {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Largest n for which sigma(n) is supported. sigma(n) < n (1 + ln n) keeps
/// every value in this domain far below 2^64.
inline constexpr u64 kDomainCap = u64{1} << 55;

inline u64 checked_add(u64 x, u64 y) {
  u64 r;
  if (__builtin_add_overflow(x, y, &r)) fail(ErrorKind::overflow, "64-bit overflow in addition");
  return r;
}

inline u64 checked_mul(u64 x, u64 y) {
  u64 r;
  if (__builtin_mul_overflow(x, y, &r)) fail(ErrorKind::overflow, "64-bit overflow in multiplication");
  return r;
}

/// floor(sqrt(n))
inline u64 isqrt(u64 n) {
  if (n < 2) return n;
  u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// floor(cbrt(n)) for 128-bit n.
inline u64 icbrt(u128 n) {
  if (n < 2) return static_cast<u64>(n);
  long double approx = __builtin_cbrtl(static_cast<long double>(n));
  u128 r = static_cast<u128>(approx);
  auto cube = [](u128 v) -> u128 { return v * v * v; };
  while (r > 0 && cube(r) > n) --r;
  while (cube(r + 1) <= n) ++r;
  return static_cast<u64>(r);
}

inline mpz_class to_mpz(u128 v) {
  mpz_class hi = static_cast<unsigned long>(static_cast<u64>(v >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<u64>(v));
  return (hi << 64) + lo;
}

inline mpz_class to_mpz(i128 v) {
  if (v >= 0) return to_mpz(static_cast<u128>(v));
  return -to_mpz(static_cast<u128>(-(v + 1)) + 1);
}

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

inline std::string to_string(i128 v) {
  if (v >= 0) return to_string(static_cast<u128>(v));
  return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
}

/// Exact three-way comparison of x*y against z*w.
inline std::strong_ordering compare_products(u128 x, u128 y, u128 z, u128 w) {
  u128 lhs, rhs;
  bool lo = __builtin_mul_overflow(x, y, &lhs);
  bool ro = __builtin_mul_overflow(z, w, &rhs);
  if (!lo && !ro) return lhs <=> rhs;
  int c = cmp(to_mpz(x) * to_mpz(y), to_mpz(z) * to_mpz(w));
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

inline std::strong_ordering to_ordering(int c) {
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace wpn
