#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "wpn/checkpoints.hpp"
#include "wpn/factor.hpp"
#include "wpn/solutions.hpp"
#include "wpn/source.hpp"

namespace wpn {

/// b sigma(n) = k (mod n) for n <= limit, meaning n | (b sigma(n) - k).
struct CongruenceProblem {
  u64 b = 1;
  i64 k = 0;
  u64 limit = 1;

  void validate() const {
    if (b < 1) fail(ErrorKind::invalid_argument, "b must be >= 1");
    if (limit < 1) fail(ErrorKind::invalid_argument, "limit must be >= 1");
  }

  /// |k| < b x^(2/3), the range in which the sporadic bound is uniform.
  bool in_uniformity_range() const {
    long double bound = static_cast<long double>(b) * std::cbrt(static_cast<long double>(limit) * limit);
    long double mag = k < 0 ? -static_cast<long double>(k) : static_cast<long double>(k);
    return mag < bound;
  }
};

inline bool solves_congruence(u64 n, u64 sigma_n, u64 b, i64 k) {
  i128 r = static_cast<i128>(static_cast<u128>(b) * sigma_n) - k;
  return r % static_cast<i128>(n) == 0;
}

/// All (p, m) with n = p m, p prime, p not dividing m, m | b sigma(m) and
/// sigma(m) = k / b. Empty when b does not divide k or k / b <= 0.
///
/// Only primes with exponent one in n are candidates, and for those
/// sigma(m) = sigma(n) / (p + 1).
inline std::vector<Witness> regular_witnesses(const FactorView& f, u64 sigma_n, u64 b, i64 k) {
  std::vector<Witness> out;
  if (k <= 0 || static_cast<u64>(k) % b != 0) return out;
  const u64 target = static_cast<u64>(k) / b;
  for (auto [p, e] : f.factors) {
    if (e != 1) continue;
    u64 m = f.n / p;
    if (sigma_n % (p + 1) != 0) continue;
    u64 sigma_m = sigma_n / (p + 1);
    if (sigma_m != target) continue;
    if ((static_cast<u128>(b) * sigma_m) % m != 0) continue;
    out.push_back({p, m});
  }
  return out;
}

inline SolutionRecord classify_congruence_solution(u64 n, u64 sigma_n, u64 b, i64 k, const FactorView& f) {
  SolutionRecord rec;
  rec.n = n;
  rec.sigma_n = sigma_n;
  i128 r = static_cast<i128>(static_cast<u128>(b) * sigma_n) - k;
  if (r >= 0) rec.q = static_cast<u64>(r / static_cast<i128>(n));
  rec.witnesses = regular_witnesses(f, sigma_n, b, k);
  rec.classification = rec.witnesses.empty() ? Classification::sporadic : Classification::regular;
  return rec;
}

/// Streams the solutions in ascending n to fn(const SolutionRecord&).
template <typename Fn>
void census_stream(const CongruenceProblem& problem, const SigmaSource& source, Fn&& fn) {
  problem.validate();
  source.for_each(1, problem.limit, [&](u64 n, u64 sigma_n, const SigmaSegment& seg) {
    if (!solves_congruence(n, sigma_n, problem.b, problem.k)) return;
    fn(classify_congruence_solution(n, sigma_n, problem.b, problem.k, factor(n, seg)));
  });
}

inline std::vector<SolutionRecord> census(const CongruenceProblem& problem, const SigmaSource& source) {
  std::vector<SolutionRecord> out;
  census_stream(problem, source, [&](const SolutionRecord& r) { out.push_back(r); });
  return out;
}

struct SporadicRow {
  u64 x = 0;
  u64 solutions = 0;
  u64 sporadic = 0;
  /// sporadic / (b^2 x^(2/3))
  double ratio = 0;
  /// ratio / x^0.05, the o(1) slack removed
  double slack_ratio = 0;
};

struct SporadicReport {
  u64 b = 1;
  i64 k = 0;
  std::vector<SporadicRow> rows;
  /// slack_ratio is nonincreasing across checkpoints or never exceeds 10.
  bool bounded = true;
};

inline constexpr double kSporadicRatioCeiling = 10.0;
inline constexpr double kSporadicSlackExponent = 0.05;

inline SporadicReport sporadic_growth_report(u64 b, i64 k, std::span<const u64> checkpoints,
                                             const SigmaSource& source) {
  validate_checkpoints(checkpoints);
  CongruenceProblem problem{b, k, checkpoints.back()};
  SporadicReport report{b, k, {}, true};
  u64 solutions = 0, sporadic = 0;
  std::size_t next = 0;
  auto flush_until = [&](u64 n) {
    while (next < checkpoints.size() && checkpoints[next] <= n) {
      long double x = static_cast<long double>(checkpoints[next]);
      long double denom = static_cast<long double>(b) * b * std::cbrt(x * x);
      SporadicRow row{checkpoints[next], solutions, sporadic, 0, 0};
      row.ratio = static_cast<double>(static_cast<long double>(sporadic) / denom);
      row.slack_ratio = static_cast<double>(row.ratio / std::pow(x, static_cast<long double>(kSporadicSlackExponent)));
      report.rows.push_back(row);
      ++next;
    }
  };
  // Solutions arrive in ascending order; a checkpoint is flushed once a
  // solution beyond it appears, the rest at the end.
  census_stream(problem, source, [&](const SolutionRecord& r) {
    if (r.n > 1) flush_until(r.n - 1);
    ++solutions;
    if (r.classification == Classification::sporadic) ++sporadic;
  });
  flush_until(problem.limit);

  bool nonincreasing = true, capped = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (report.rows[i].slack_ratio > kSporadicRatioCeiling) capped = false;
    if (i > 0 && report.rows[i].slack_ratio > report.rows[i - 1].slack_ratio) nonincreasing = false;
  }
  report.bounded = nonincreasing || capped;
  return report;
}

}  // namespace wpn
