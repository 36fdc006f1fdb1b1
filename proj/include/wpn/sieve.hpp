#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "wpn/arith.hpp"
#include "wpn/error.hpp"
#include "wpn/rational.hpp"

namespace wpn {

inline constexpr u64 kDefaultSegmentLength = u64{1} << 22;
inline constexpr u64 kDefaultSegmentBudget = u64{1} << 26;
inline constexpr u64 kMaxSieveBound = (u64{1} << 63) - 1;

/// sigma(n) by trial division up to sqrt(n). Slow; for verification only.
inline u64 sigma_oracle(u64 n) {
  if (n == 0) fail(ErrorKind::invalid_argument, "sigma is defined for n >= 1");
  if (n > kDomainCap) fail(ErrorKind::overflow, "n exceeds the supported domain 2^55");
  u64 total = 0;
  for (u64 d = 1; d <= n / d; ++d) {
    if (n % d != 0) continue;
    u64 e = n / d;
    total = checked_add(total, d);
    if (e != d) total = checked_add(total, e);
  }
  return total;
}

/// sigma(n)/n in lowest terms.
inline Fraction abundancy(u64 n, u64 sigma_n) { return Fraction::make(sigma_n, n); }
inline Fraction abundancy(u64 n) { return abundancy(n, sigma_oracle(n)); }

/// Primes <= limit by a plain sieve of Eratosthenes.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (u64 m = p * p; m <= limit; m += p) composite[m] = true;
  }
  return primes;
}

/// sigma and smallest prime factor over [lo, hi]. Immutable once built.
struct SigmaSegment {
  u64 lo = 1;
  u64 hi = 0;
  std::vector<u64> sigma;
  std::vector<u64> spf;  // 0 for n = 1
  u64 segment_id = 0;

  std::size_t size() const noexcept { return sigma.size(); }
  bool contains(u64 n) const noexcept { return n >= lo && n <= hi; }
  u64 sigma_at(u64 n) const { return sigma.at(n - lo); }
  u64 spf_at(u64 n) const { return spf.at(n - lo); }

  friend bool operator==(const SigmaSegment&, const SigmaSegment&) = default;
};

/// Segmented divisor-add sieve. Holds the base primes up to sqrt(max_hi) so
/// repeated segments do not rebuild them.
class SegmentedSieve {
 public:
  explicit SegmentedSieve(u64 max_hi, u64 budget = kDefaultSegmentBudget)
      : max_hi_(max_hi), budget_(budget) {
    check_bound(max_hi);
    base_primes_ = primes_up_to(isqrt(max_hi));
  }

  u64 max_hi() const noexcept { return max_hi_; }
  u64 budget() const noexcept { return budget_; }

  SigmaSegment sieve(u64 lo, u64 hi, u64 segment_id = 0) const {
    SigmaSegment seg;
    seg.lo = lo;
    seg.hi = hi;
    seg.segment_id = segment_id;
    validate(lo, hi);
    seg.sigma = sigma_range(lo, hi);
    fill_spf(seg);
    return seg;
  }

  /// Rebuilds the smallest-prime-factor column of a segment whose sigma
  /// column is already present (e.g. loaded from a cache file).
  void fill_spf(SigmaSegment& seg) const {
    validate(seg.lo, seg.hi);
    const u64 lo = seg.lo, hi = seg.hi;
    seg.spf.assign(hi - lo + 1, 0);
    for (u64 p : base_primes_) {
      if (p > hi / p) break;
      u64 start = std::max(p, (lo + p - 1) / p * p);
      for (u64 n = start; n <= hi; n += p)
        if (seg.spf[n - lo] == 0) seg.spf[n - lo] = p;
    }
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n)
      if (seg.spf[n - lo] == 0) seg.spf[n - lo] = n;
  }

 private:
  static void check_bound(u64 hi) {
    if (hi > kMaxSieveBound) fail(ErrorKind::overflow, "bound exceeds 2^63-1");
    if (hi > kDomainCap) fail(ErrorKind::overflow, "bound exceeds the supported domain 2^55");
  }

  void validate(u64 lo, u64 hi) const {
    if (lo < 1 || hi < lo)
      fail(ErrorKind::invalid_argument,
           "invalid sieve range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    check_bound(hi);
    if (hi > max_hi_)
      fail(ErrorKind::capability, "range end " + std::to_string(hi) + " exceeds sieve capacity " +
                                      std::to_string(max_hi_));
    if (hi - lo + 1 > budget_)
      fail(ErrorKind::budget_exceeded, "segment of " + std::to_string(hi - lo + 1) +
                                           " entries exceeds the budget of " +
                                           std::to_string(budget_));
  }

  // hi <= 2^55, so n + d below cannot wrap.
  // Every divisor pair (d, e) with d <= e, d*e = n, contributes d + e
  // (or d once when d == e); only d <= sqrt(hi) needs a loop.
  static std::vector<u64> sigma_range(u64 lo, u64 hi) {
    std::vector<u64> sigma(hi - lo + 1, 0);
    const u64 root = isqrt(hi);
    bool overflow = false;
    for (u64 d = 1; d <= root; ++d) {
      u64 e = std::max(d, (lo + d - 1) / d);
      u64 n = d * e;
      for (; n <= hi; n += d, ++e) {
        u64 add = e == d ? d : d + e;
        overflow |= __builtin_add_overflow(sigma[n - lo], add, &sigma[n - lo]);
      }
    }
    if (overflow) fail(ErrorKind::overflow, "sigma exceeds 64 bits");
    return sigma;
  }

  u64 max_hi_;
  u64 budget_;
  std::vector<u64> base_primes_;
};

/// One-off segment. Prefer a shared SegmentedSieve when sieving many segments.
inline SigmaSegment sieve_segment(u64 lo, u64 hi, u64 budget = kDefaultSegmentBudget) {
  if (lo < 1 || hi < lo)
    fail(ErrorKind::invalid_argument,
         "invalid sieve range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (hi - lo + 1 > budget)
    fail(ErrorKind::budget_exceeded, "segment exceeds the configured budget");
  return SegmentedSieve(hi, budget).sieve(lo, hi);
}

/// Linear smallest-prime-factor sieve over [1, limit], computing sigma
/// multiplicatively. O(limit) time and memory.
class LinearSieve {
 public:
  explicit LinearSieve(u64 limit, u64 budget = kDefaultSegmentBudget) : limit_(limit) {
    if (limit < 1) fail(ErrorKind::invalid_argument, "linear sieve limit must be >= 1");
    if (limit > budget) fail(ErrorKind::budget_exceeded, "linear sieve exceeds the budget");
    if (limit > kDomainCap) fail(ErrorKind::overflow, "bound exceeds the supported domain 2^55");
    spf_.assign(limit + 1, 0);
    sigma_.assign(limit + 1, 0);
    std::vector<u64> prime_power(limit + 1, 0);  // largest power of spf(n) dividing n
    sigma_[1] = 1;
    for (u64 i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = i;
        prime_power[i] = i;
        sigma_[i] = i + 1;
        primes_.push_back(i);
      }
      for (u64 p : primes_) {
        if (p > spf_[i] || p > limit / i) break;
        u64 n = i * p;
        spf_[n] = p;
        if (p < spf_[i]) {
          prime_power[n] = p;
          sigma_[n] = sigma_[i] * (p + 1);
        } else {
          prime_power[n] = prime_power[i] * p;
          if (prime_power[n] == n)
            sigma_[n] = sigma_[i] * p + 1;
          else
            sigma_[n] = sigma_[n / prime_power[n]] * sigma_[prime_power[n]];
        }
      }
    }
  }

  u64 limit() const noexcept { return limit_; }
  u64 sigma(u64 n) const { return sigma_.at(n); }
  u64 spf(u64 n) const { return spf_.at(n); }
  const std::vector<u64>& primes() const noexcept { return primes_; }

  SigmaSegment segment(u64 lo, u64 hi) const {
    if (lo < 1 || hi < lo || hi > limit_)
      fail(ErrorKind::invalid_argument, "range outside the linear sieve");
    SigmaSegment seg;
    seg.lo = lo;
    seg.hi = hi;
    seg.sigma.assign(sigma_.begin() + static_cast<std::ptrdiff_t>(lo),
                     sigma_.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    seg.spf.assign(spf_.begin() + static_cast<std::ptrdiff_t>(lo),
                   spf_.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    return seg;
  }

 private:
  u64 limit_;
  std::vector<u64> spf_;
  std::vector<u64> sigma_;
  std::vector<u64> primes_;
};

}  // namespace wpn
