#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wpn/bignum.hpp"
#include "wpn/checkpoints.hpp"
#include "wpn/rational.hpp"
#include "wpn/source.hpp"
#include "wpn/threshold.hpp"

namespace wpn {

struct CdfPoint {
  std::string u;
  u64 count = 0;
  double value = 0;  // count / x
};

/// F_x(u) = #{n <= x : sigma(n)/n <= u} / x on a grid of u.
struct EmpiricalCDF {
  u64 sample_limit = 0;
  std::vector<CdfPoint> points;
};

namespace detail {

inline void check_grid(std::span<const Fraction> grid) {
  if (grid.empty()) fail(ErrorKind::invalid_argument, "empty CDF grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) fail(ErrorKind::invalid_argument, "CDF grid must be strictly ascending");
}

inline EmpiricalCDF finish_cdf(u64 x, std::vector<std::string> labels, const std::vector<u64>& bucket) {
  EmpiricalCDF cdf{x, {}};
  u64 acc = 0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    acc += bucket[j];
    cdf.points.push_back({std::move(labels[j]), acc, static_cast<double>(acc) / static_cast<double>(x)});
  }
  return cdf;
}

}  // namespace detail

/// Exact CDF at rational u. Ties sigma(n)/n = u are counted when `inclusive`.
inline EmpiricalCDF empirical_cdf(u64 x, std::span<const Fraction> grid, const SigmaSource& source,
                                  bool inclusive = true) {
  if (x < 1) fail(ErrorKind::invalid_argument, "sample limit must be >= 1");
  detail::check_grid(grid);
  // bucket[j] counts n whose first admitting grid point is j
  std::vector<u64> bucket(grid.size() + 1, 0);
  source.for_each(1, x, [&](u64 n, u64 sigma_n, const SigmaSegment&) {
    // u admits n iff sigma/n <= u (or < u), i.e. sigma * u.den <= u.num * n
    auto below = [&](const Fraction& u) {
      auto c = compare_products(u.num, n, sigma_n, u.den);
      return inclusive ? c < 0 : c <= 0;
    };
    auto it = std::partition_point(grid.begin(), grid.end(), below);
    ++bucket[static_cast<std::size_t>(it - grid.begin())];
  });
  std::vector<std::string> labels;
  for (const auto& u : grid) labels.push_back(u.to_string());
  return detail::finish_cdf(x, std::move(labels), bucket);
}

/// Tie tolerance for CDF queries at non-rational u.
inline const Real& cdf_tie_epsilon() {
  static const Real eps = Real::parse("1e-30");
  return eps;
}

/// CDF at arbitrary real u: 256-bit comparison, with sigma(n)/n <= u + 1e-30
/// counted as a tie (included).
inline EmpiricalCDF empirical_cdf(u64 x, std::span<const Real> grid, const SigmaSource& source) {
  if (x < 1) fail(ErrorKind::invalid_argument, "sample limit must be >= 1");
  if (grid.empty()) fail(ErrorKind::invalid_argument, "empty CDF grid");
  std::vector<Real> upper;
  std::vector<long double> approx;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i - 1] < grid[i])) fail(ErrorKind::invalid_argument, "CDF grid must be strictly ascending");
    upper.push_back(grid[i] + cdf_tie_epsilon());
    approx.push_back(grid[i].to_long_double());
  }
  std::vector<u64> bucket(grid.size() + 1, 0);
  source.for_each(1, x, [&](u64 n, u64 sigma_n, const SigmaSegment&) {
    const long double r = static_cast<long double>(sigma_n) / static_cast<long double>(n);
    auto below = [&](std::size_t j) {
      long double d = r - approx[j];
      if (d > 1e-15L * r) return true;
      if (d < -1e-15L * r) return false;
      Real exact = Real::from_u64(sigma_n) / Real::from_u64(n);
      return exact > upper[j];
    };
    std::size_t lo = 0, hi = grid.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (below(mid)) lo = mid + 1;
      else hi = mid;
    }
    ++bucket[lo];
  });
  std::vector<std::string> labels;
  for (const auto& u : grid) labels.push_back(u.to_scientific(20));
  return detail::finish_cdf(x, std::move(labels), bucket);
}

// ---------------------------------------------------------------------------

enum class Regime { sublinear, linear, superlinear };

/// sublinear: k(n) = n^c, c in (0,1); linear: k(n) = c n; superlinear: n log n.
struct PhaseRegime {
  Regime kind = Regime::sublinear;
  Fraction c{1, 2};

  ThresholdSpec threshold() const {
    switch (kind) {
      case Regime::sublinear: return ThresholdSpec::power(c);
      case Regime::linear: return ThresholdSpec::linear(c);
      case Regime::superlinear: return ThresholdSpec::y_log_y();
    }
    return ThresholdSpec::y_log_y();
  }
};

struct PhaseRow {
  u64 x = 0;
  u64 count = 0;
  double density = 0;
  /// linear: F_x(l + c) - F_x(l - c), and the count behind it
  std::optional<double> reference;
  std::optional<u64> reference_count;
  /// linear: #{n <= x : l - c < sigma(n)/n < l + c} / x
  std::optional<double> reference_open;
};

struct PhaseReport {
  RationalTarget target;
  PhaseRegime regime;
  std::vector<PhaseRow> rows;
  /// sublinear: density nonincreasing and strictly lower at the end;
  /// superlinear: density nondecreasing; linear: every |density - reference| <= 1e-3.
  bool expectation_met = false;
  double max_reference_gap = 0;
};

inline constexpr double kPhaseLinearTolerance = 1e-3;

inline PhaseReport phase_experiment(const RationalTarget& target, const PhaseRegime& regime,
                                    std::span<const u64> checkpoints, const SigmaSource& source) {
  validate_checkpoints(checkpoints);
  const ThresholdSpec threshold = regime.threshold();
  const u64 b = target.b();
  PhaseReport report{target, regime, {}, false, 0};

  // window bounds l +- c as fractions; lower clamps at 0
  const bool linear = regime.kind == Regime::linear;
  const u128 top_num = static_cast<u128>(target.a()) * regime.c.den + static_cast<u128>(regime.c.num) * b;
  const u128 a_q = static_cast<u128>(target.a()) * regime.c.den, p_b = static_cast<u128>(regime.c.num) * b;
  const u128 bottom_num = a_q > p_b ? a_q - p_b : 0;
  const u128 den = static_cast<u128>(b) * regime.c.den;

  u64 count = 0, cdf_top = 0, cdf_bottom = 0, open = 0;
  std::size_t next = 0;
  source.for_each(1, checkpoints.back(), [&](u64 n, u64 sigma_n, const SigmaSegment&) {
    if (threshold.admits(Deviation::of(target.deviation(n, sigma_n)), Argument::of(n), b)) ++count;
    if (linear) {
      // sigma/n vs num/den  <=>  sigma * den vs num * n
      auto vs_top = compare_products(sigma_n, den, top_num, n);
      auto vs_bottom = compare_products(sigma_n, den, bottom_num, n);
      if (vs_top <= 0) ++cdf_top;
      if (vs_bottom <= 0) ++cdf_bottom;
      if (vs_top < 0 && vs_bottom > 0) ++open;
    }
    while (next < checkpoints.size() && checkpoints[next] == n) {
      const double xd = static_cast<double>(n);
      PhaseRow row{n, count, static_cast<double>(count) / xd, std::nullopt, std::nullopt, std::nullopt};
      if (linear) {
        row.reference_count = cdf_top - cdf_bottom;
        row.reference = static_cast<double>(*row.reference_count) / xd;
        row.reference_open = static_cast<double>(open) / xd;
      }
      report.rows.push_back(row);
      ++next;
    }
  });

  const auto& rows = report.rows;
  switch (regime.kind) {
    case Regime::sublinear: {
      bool ok = true;
      for (std::size_t i = 1; i < rows.size(); ++i) ok = ok && rows[i].density <= rows[i - 1].density;
      report.expectation_met = ok && (rows.size() < 2 || rows.back().density < rows.front().density);
      break;
    }
    case Regime::superlinear: {
      bool ok = true;
      for (std::size_t i = 1; i < rows.size(); ++i) ok = ok && rows[i].density >= rows[i - 1].density;
      report.expectation_met = ok;
      break;
    }
    case Regime::linear: {
      // gap from the integer counts, so a gap of exactly 1/1000 compares exactly
      for (const auto& r : rows) {
        const u64 diff = r.count > *r.reference_count ? r.count - *r.reference_count : *r.reference_count - r.count;
        report.max_reference_gap =
            std::max(report.max_reference_gap, static_cast<double>(diff) / static_cast<double>(r.x));
      }
      report.expectation_met = report.max_reference_gap <= kPhaseLinearTolerance;
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

struct ProbeHit {
  std::size_t level = 0;
  u64 search_limit = 0;
  u64 m = 0;
  Fraction ratio;
  Real distance;
  /// distance < 1 / log m (false for m = 1)
  bool within_inverse_log = false;
};

struct ProbeReport {
  std::vector<ProbeHit> hits;
  /// The last level found nothing closer than the level before it.
  bool exhausted = false;
};

/// Closest abundancy ratio to `target` among m <= L_i, for the level limits
/// L_i = round(search_limit^(i/depth)), i = 1..depth.
inline ProbeReport sigma_approx_probe(const Real& target, std::size_t depth, u64 search_limit,
                                      const SigmaSource& source) {
  if (!(target > Real(1))) fail(ErrorKind::invalid_argument, "probe target must exceed 1");
  if (depth < 1) fail(ErrorKind::invalid_argument, "probe depth must be >= 1");
  if (search_limit < 1) fail(ErrorKind::invalid_argument, "search limit must be >= 1");

  std::vector<u64> levels;
  for (std::size_t i = 1; i <= depth; ++i) {
    long double e = static_cast<long double>(i) / static_cast<long double>(depth);
    u64 lim = i == depth ? search_limit
                         : static_cast<u64>(std::llround(std::pow(static_cast<long double>(search_limit), e)));
    lim = std::clamp<u64>(lim, 1, search_limit);
    levels.push_back(lim);
  }

  const long double approx_target = target.to_long_double();
  Real best_distance;
  long double best_approx = std::numeric_limits<long double>::infinity();
  u64 best_m = 0, best_sigma = 0;
  ProbeReport report;
  std::size_t next = 0;
  source.for_each(1, search_limit, [&](u64 m, u64 sigma_m, const SigmaSegment&) {
    long double r = static_cast<long double>(sigma_m) / static_cast<long double>(m);
    long double d = std::fabs(r - approx_target);
    if (best_m == 0 || d <= best_approx + 1e-15L) {
      Real exact = abs(Real::from_u64(sigma_m) / Real::from_u64(m) - target);
      if (best_m == 0 || exact < best_distance) {
        best_distance = exact;
        best_approx = d;
        best_m = m;
        best_sigma = sigma_m;
      }
    }
    while (next < levels.size() && levels[next] == m) {
      ProbeHit hit{next + 1, m, best_m, abundancy(best_m, best_sigma), best_distance, false};
      if (best_m >= 2) hit.within_inverse_log = best_distance * log(Real::from_u64(best_m)) < Real(1);
      report.hits.push_back(std::move(hit));
      ++next;
    }
  });
  if (report.hits.size() >= 2) {
    const auto& h = report.hits;
    report.exhausted = !(h.back().distance < h[h.size() - 2].distance);
  }
  return report;
}

}  // namespace wpn
