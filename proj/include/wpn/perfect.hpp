#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "wpn/bignum.hpp"
#include "wpn/checkpoints.hpp"
#include "wpn/rational.hpp"
#include "wpn/sieve.hpp"
#include "wpn/source.hpp"

namespace wpn {

/// All m <= limit with b sigma(m) = a m, plus the counting function
/// P(t) = #{m <= t : sigma(m) = (a/b) m} at the requested checkpoints.
struct PerfectCensus {
  RationalTarget target;
  u64 limit = 0;
  std::vector<u64> members;
  CheckpointSeries counting_function;
};

inline PerfectCensus enumerate_perfect(const RationalTarget& target, u64 limit, const SigmaSource& source,
                                       std::span<const u64> checkpoints = {}) {
  if (limit < 1) fail(ErrorKind::invalid_argument, "limit must be >= 1");
  if (!checkpoints.empty()) {
    validate_checkpoints(checkpoints);
    if (checkpoints.back() > limit) fail(ErrorKind::invalid_argument, "checkpoint beyond the limit");
  }
  PerfectCensus census{target, limit, {}, {}};
  std::size_t next = 0;
  source.for_each(1, limit, [&](u64 n, u64 sigma_n, const SigmaSegment&) {
    if (target.is_perfect(n, sigma_n)) census.members.push_back(n);
    while (next < checkpoints.size() && checkpoints[next] == n) {
      census.counting_function.push_back({n, census.members.size(), std::nullopt});
      ++next;
    }
  });
  return census;
}

/// Multiply perfect numbers: n <= limit with n | sigma(n). Includes n = 1.
inline std::vector<u64> enumerate_multiply_perfect(u64 limit, const SigmaSource& source) {
  std::vector<u64> out;
  source.for_each(1, limit, [&](u64 n, u64 sigma_n, const SigmaSegment&) {
    if (sigma_n % n == 0) out.push_back(n);
  });
  return out;
}

struct WirsingRow {
  u64 x = 0;
  u64 count = 0;
  /// log P(x) / (log x / log log x); absent when P(x) = 0 or x < 3.
  std::optional<double> ratio;
};

struct WirsingReport {
  RationalTarget target;
  std::vector<WirsingRow> rows;
  /// Set when the last defined ratio exceeds the first one, i.e. the
  /// normalized count grew over the checkpoint range.
  bool violation = false;
};

/// Empirical consistency check of P(x) <= exp(O(log x / log log x)).
inline WirsingReport wirsing_count_check(const RationalTarget& target, std::span<const u64> checkpoints,
                                         const SigmaSource& source) {
  validate_checkpoints(checkpoints);
  auto census = enumerate_perfect(target, checkpoints.back(), source, checkpoints);
  WirsingReport report{target, {}, false};
  std::optional<double> first, last;
  for (const auto& row : census.counting_function) {
    WirsingRow w{row.x, row.count, std::nullopt};
    if (row.count > 0 && row.x >= 3) {
      double lx = std::log(static_cast<double>(row.x));
      w.ratio = std::log(static_cast<double>(row.count)) / (lx / std::log(lx));
    }
    if (w.ratio) {
      if (!first) first = w.ratio;
      last = w.ratio;
    }
    report.rows.push_back(w);
  }
  report.violation = first && last && *last > *first;
  return report;
}

/// Partial sums over the members m <= x of sigma(m) = (a/b) m.
struct SeriesSums {
  std::vector<u64> members;
  mpq_class sum_reciprocal;  // exact
  Real sum_log_over_m;       // 256-bit
};

inline SeriesSums series_partial_sums(const RationalTarget& target, u64 limit, const SigmaSource& source) {
  SeriesSums sums;
  sums.members = enumerate_perfect(target, limit, source).members;
  sums.sum_reciprocal = 0;
  for (u64 m : sums.members) {
    sums.sum_reciprocal += mpq_class(1, static_cast<unsigned long>(m));
    Real rm = Real::from_u64(m);
    sums.sum_log_over_m += log(rm) / rm;
  }
  sums.sum_reciprocal.canonicalize();
  return sums;
}

/// Sum over x^(1/3) < m <= x^(2/3) of gcd(m, sigma(m)) / m^2.
struct GcdSumReport {
  u64 x = 0;
  u64 m_min = 0;  // first m in range
  u64 m_max = 0;  // last m in range
  mpq_class value;
  /// value / (3 x^(-1/3))
  double ratio_to_bound = 0;
  /// value * x^(1/3)
  double scaled = 0;
};

inline GcdSumReport gcd_sum(u64 x, const SigmaSource& source) {
  if (x < 8) fail(ErrorKind::invalid_argument, "gcd sum needs x >= 8");
  GcdSumReport report;
  report.x = x;
  report.m_min = icbrt(x) + 1;
  report.m_max = icbrt(static_cast<u128>(x) * x);
  if (report.m_max < report.m_min) fail(ErrorKind::invalid_argument, "empty summation range");

  // Accumulate over the common denominator L = lcm(m^2) to avoid a gcd per term.
  mpz_class lcm = 1;
  for (u64 p : primes_up_to(report.m_max)) {
    u64 power = p;
    while (power <= report.m_max / p) power *= p;
    mpz_class pe = static_cast<unsigned long>(power);
    lcm *= pe * pe;
  }
  mpz_class numerator = 0, term;
  source.for_each(report.m_min, report.m_max, [&](u64 m, u64 sigma_m, const SigmaSegment&) {
    u64 g = std::gcd(m, sigma_m);
    mpz_class m2 = static_cast<unsigned long>(m);
    m2 *= m2;
    mpz_divexact(term.get_mpz_t(), lcm.get_mpz_t(), m2.get_mpz_t());
    term *= static_cast<unsigned long>(g);
    numerator += term;
  });
  report.value = mpq_class(numerator, lcm);
  report.value.canonicalize();
  long double cube = std::cbrt(static_cast<long double>(x));
  long double v = static_cast<long double>(to_double(report.value));
  report.scaled = static_cast<double>(v * cube);
  report.ratio_to_bound = static_cast<double>(v * cube / 3.0L);
  return report;
}

}  // namespace wpn
