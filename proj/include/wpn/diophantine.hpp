#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "wpn/checkpoints.hpp"
#include "wpn/factor.hpp"
#include "wpn/rational.hpp"
#include "wpn/solutions.hpp"
#include "wpn/source.hpp"

namespace wpn {

/// b sigma(n) = a n + k over n <= limit.
struct DiophantineProblem {
  u64 a = 2;
  u64 b = 1;
  i64 k = 1;
  u64 limit = 1;

  void validate() const {
    if (b < 1 || a <= b) fail(ErrorKind::invalid_argument, "need a > b >= 1");
    if (std::gcd(a, b) != 1) fail(ErrorKind::invalid_argument, "need gcd(a, b) = 1");
    if (k == 0) fail(ErrorKind::invalid_argument, "k must be nonzero (k = 0 is the perfect-number census)");
    if (limit < 1) fail(ErrorKind::invalid_argument, "limit must be >= 1");
  }
};

/// The regular family n = p m0, m0 = k/a, exists when ab | k and
/// sigma(k/a) = k/b (k > 0). Then sigma(p m0) = (p+1) sigma(m0) gives
/// b sigma(n) = a n + k for every prime p not dividing m0.
struct RegularFamily {
  bool applies = false;
  u64 m0 = 0;
};

inline RegularFamily regular_family(const DiophantineProblem& problem) {
  if (problem.k <= 0) return {};
  const u64 k = static_cast<u64>(problem.k);
  u128 ab = static_cast<u128>(problem.a) * problem.b;
  if (k % ab != 0) return {};
  u64 m0 = k / problem.a;
  if (m0 > kDomainCap) return {};
  if (sigma_oracle(m0) != k / problem.b) return {};
  return {true, m0};
}

inline bool solves_diophantine(u64 n, u64 sigma_n, const DiophantineProblem& problem) {
  i128 lhs = static_cast<i128>(static_cast<u128>(problem.b) * sigma_n);
  i128 rhs = static_cast<i128>(static_cast<u128>(problem.a) * n) + problem.k;
  return lhs == rhs;
}

struct DiophantineRow {
  u64 x = 0;
  u64 count = 0;
  std::optional<double> quotient;           // count / (x / log x)
  std::optional<double> predicted_density;  // a / k, regular family only
  std::optional<double> predicted_count;    // (a/k) x / log(a x / k)
};

struct DiophantineResult {
  DiophantineProblem problem;
  RegularFamily family;
  std::vector<SolutionRecord> solutions;
  std::vector<DiophantineRow> series;
};

/// Regular iff the family applies and n = p m0 with p prime, p not dividing m0.
inline std::optional<Witness> diophantine_witness(u64 n, const RegularFamily& family, const FactorView& f) {
  if (!family.applies || n % family.m0 != 0) return std::nullopt;
  u64 p = n / family.m0;
  if (p < 2 || family.m0 % p == 0) return std::nullopt;
  if (f.omega == 0) return std::nullopt;
  for (auto [q, e] : f.factors) {
    if (q != p) continue;
    // p prime and divides n exactly once, so it is the cofactor
    return e == 1 ? std::optional<Witness>(Witness{p, family.m0}) : std::nullopt;
  }
  return std::nullopt;
}

inline DiophantineResult solve_diophantine(const DiophantineProblem& problem, const SigmaSource& source,
                                           std::span<const u64> checkpoints = {}) {
  problem.validate();
  std::vector<u64> xs(checkpoints.begin(), checkpoints.end());
  if (xs.empty()) xs.push_back(problem.limit);
  validate_checkpoints(xs);
  if (xs.back() > problem.limit) fail(ErrorKind::invalid_argument, "checkpoint beyond the limit");

  DiophantineResult result{problem, regular_family(problem), {}, {}};
  std::size_t next = 0;
  source.for_each(1, problem.limit, [&](u64 n, u64 sigma_n, const SigmaSegment& seg) {
    if (solves_diophantine(n, sigma_n, problem)) {
      SolutionRecord rec;
      rec.n = n;
      rec.sigma_n = sigma_n;
      rec.q = problem.a;
      if (result.family.applies) {
        if (auto w = diophantine_witness(n, result.family, factor(n, seg))) {
          rec.classification = Classification::regular;
          rec.witnesses.push_back(*w);
        }
      }
      result.solutions.push_back(std::move(rec));
    }
    while (next < xs.size() && xs[next] == n) {
      DiophantineRow row{n, result.solutions.size(), normalized_quotient(result.solutions.size(), n), {}, {}};
      if (result.family.applies) {
        long double density = static_cast<long double>(problem.a) / static_cast<long double>(problem.k);
        row.predicted_density = static_cast<double>(density);
        long double arg = density * static_cast<long double>(n);
        if (arg > 1) row.predicted_count = static_cast<double>(arg / std::log(arg));
      }
      result.series.push_back(row);
      ++next;
    }
  });
  return result;
}

}  // namespace wpn
