#pragma once

#include <vector>

#include "wpn/arith.hpp"
#include "wpn/sieve.hpp"

namespace wpn {

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactorView {
  u64 n = 1;
  std::vector<PrimePower> factors;  // ascending primes
  unsigned omega = 0;
  u64 largest_prime_factor = 1;

  /// sigma(n) from the factorization.
  u64 sigma() const {
    u64 total = 1;
    for (auto [p, e] : factors) {
      u64 term = 1, power = 1;
      for (unsigned i = 0; i < e; ++i) {
        power = checked_mul(power, p);
        term = checked_add(term, power);
      }
      total = checked_mul(total, term);
    }
    return total;
  }
};

namespace detail {

inline void push_factor(FactorView& view, u64 p) {
  if (!view.factors.empty() && view.factors.back().prime == p)
    ++view.factors.back().exponent;
  else
    view.factors.push_back({p, 1});
}

inline void finish(FactorView& view) {
  view.omega = static_cast<unsigned>(view.factors.size());
  view.largest_prime_factor = view.factors.empty() ? 1 : view.factors.back().prime;
}

// Trial division of `rest` by candidates >= `from`; `rest` has no prime
// factor below `from`.
inline void trial_divide(FactorView& view, u64 rest, u64 from) {
  if (from <= 2 && rest % 2 == 0) {
    while (rest % 2 == 0) {
      push_factor(view, 2);
      rest /= 2;
    }
  }
  u64 d = from <= 3 ? 3 : (from | 1);
  for (; d <= rest / d; d += 2) {
    while (rest % d == 0) {
      push_factor(view, d);
      rest /= d;
    }
  }
  if (rest > 1) push_factor(view, rest);
}

}  // namespace detail

/// Factorization by trial division.
inline FactorView factor(u64 n) {
  if (n == 0) fail(ErrorKind::invalid_argument, "cannot factor 0");
  FactorView view;
  view.n = n;
  detail::trial_divide(view, n, 2);
  detail::finish(view);
  return view;
}

/// Factorization using the segment's smallest-prime-factor column for the
/// first prime, trial division for the cofactor. Falls back to plain trial
/// division when n is outside the segment.
inline FactorView factor(u64 n, const SigmaSegment& context) {
  if (!context.contains(n) || context.spf.empty()) return factor(n);
  FactorView view;
  view.n = n;
  if (n > 1) {
    u64 p = context.spf_at(n);
    u64 rest = n;
    while (rest % p == 0) {
      detail::push_factor(view, p);
      rest /= p;
    }
    if (rest > 1) detail::trial_divide(view, rest, p + 1);
  }
  detail::finish(view);
  return view;
}

/// Factorization by repeated lookup in a full smallest-prime-factor table.
inline FactorView factor(u64 n, const LinearSieve& table) {
  if (n > table.limit()) return factor(n);
  if (n == 0) fail(ErrorKind::invalid_argument, "cannot factor 0");
  FactorView view;
  view.n = n;
  while (n > 1) {
    u64 p = table.spf(n);
    detail::push_factor(view, p);
    n /= p;
  }
  detail::finish(view);
  return view;
}

}  // namespace wpn
