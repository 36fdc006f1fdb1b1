#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "wpn/checkpoints.hpp"
#include "wpn/perfect.hpp"
#include "wpn/rational.hpp"
#include "wpn/source.hpp"
#include "wpn/threshold.hpp"

namespace wpn {

/// How W(l; k; x) is counted.
///  - strict: |sigma(n) - l n| < k (otherwise <=)
///  - threshold_at_n: compare against k(n); otherwise k(x), the W-tilde set
///  - include_one: count n = 1
struct CountingConvention {
  bool strict = true;
  bool threshold_at_n = true;
  bool include_one = true;

  std::string label() const {
    return std::string(strict ? "strict" : "non-strict") + (include_one ? ", n>=1" : ", n>=2") +
           (threshold_at_n ? "" : ", k(x)");
  }
  friend bool operator==(const CountingConvention&, const CountingConvention&) = default;
};

/// The four strictness x start-point variants, in the order the counting
/// kernel stores them.
inline constexpr std::array<CountingConvention, 4> kCountingVariants = {{
    {true, true, true},
    {true, true, false},
    {false, true, true},
    {false, true, false},
}};

inline std::size_t variant_index(const CountingConvention& c) {
  return (c.strict ? 0 : 2) + (c.include_one ? 0 : 1);
}

struct WithinSeries {
  RationalTarget target;
  ThresholdSpec threshold;
  CountingConvention convention;
  CheckpointSeries rows;
};

/// counts[t][j][v]: threshold t, checkpoint j, variant v (kCountingVariants).
using VariantCounts = std::vector<std::vector<std::array<u64, 4>>>;

/// One pass over [1, max checkpoint] counting every threshold under all four
/// variants.
inline VariantCounts count_variants(const RationalTarget& target, std::span<const ThresholdSpec> thresholds,
                                    std::span<const u64> checkpoints, const SigmaSource& source,
                                    bool threshold_at_n = true) {
  validate_checkpoints(checkpoints);
  const std::size_t nt = thresholds.size(), nc = checkpoints.size();
  VariantCounts out(nt, std::vector<std::array<u64, 4>>(nc, std::array<u64, 4>{}));
  std::vector<std::array<u64, 4>> running(nt, std::array<u64, 4>{});
  std::vector<Argument> at_x;
  for (u64 x : checkpoints) at_x.push_back(Argument::of(x));
  const u64 b = target.b();

  auto tally = [](std::array<u64, 4>& slot, std::strong_ordering c, u64 n) {
    const bool lt = c < 0, le = c <= 0, two = n >= 2;
    slot[0] += lt;
    slot[1] += lt && two;
    slot[2] += le;
    slot[3] += le && two;
  };

  std::size_t next = 0;
  source.for_each(1, checkpoints.back(), [&](u64 n, u64 sigma_n, const SigmaSegment&) {
    const Deviation dev = Deviation::of(target.deviation(n, sigma_n));
    if (threshold_at_n) {
      const Argument arg = Argument::of(n);
      for (std::size_t t = 0; t < nt; ++t) tally(running[t], thresholds[t].compare(dev, arg, b), n);
    } else {
      for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t j = next; j < nc; ++j) tally(out[t][j], thresholds[t].compare(dev, at_x[j], b), n);
    }
    while (next < nc && checkpoints[next] == n) {
      if (threshold_at_n)
        for (std::size_t t = 0; t < nt; ++t) out[t][next] = running[t];
      ++next;
    }
  });
  return out;
}

inline std::vector<WithinSeries> series_multi(const RationalTarget& target,
                                              std::span<const ThresholdSpec> thresholds,
                                              std::span<const u64> checkpoints, const SigmaSource& source,
                                              CountingConvention convention = {}) {
  auto counts = count_variants(target, thresholds, checkpoints, source, convention.threshold_at_n);
  const std::size_t v = variant_index(convention);
  std::vector<WithinSeries> out;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    WithinSeries s{target, thresholds[t], convention, {}};
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
      u64 c = counts[t][j][v];
      s.rows.push_back({checkpoints[j], c, normalized_quotient(c, checkpoints[j])});
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Counts of W(l; k; x) and the quotient count / (x / log x) at each
/// checkpoint. The convention's `strict` overrides the threshold's own flag.
inline WithinSeries series(const RationalTarget& target, const ThresholdSpec& threshold,
                           std::span<const u64> checkpoints, const SigmaSource& source,
                           CountingConvention convention = {}) {
  std::array<ThresholdSpec, 1> one{threshold};
  return std::move(series_multi(target, one, checkpoints, source, convention).front());
}

inline WithinSeries count_within(const RationalTarget& target, const ThresholdSpec& threshold, u64 x,
                                 const SigmaSource& source, CountingConvention convention = {}) {
  std::array<u64, 1> xs{x};
  return series(target, threshold, xs, source, convention);
}

/// Figure data: W(2; y/log y; x) / (x / log x) at every integer x in [2, x_max].
inline WithinSeries figure1_series(const SigmaSource& source, u64 x_max = 10000,
                                   CountingConvention convention = {}) {
  if (x_max < 2) fail(ErrorKind::invalid_argument, "figure range needs x_max >= 2");
  auto xs = integer_checkpoints(2, x_max);
  return series(RationalTarget::make(2, 1), ThresholdSpec::x_over_log(), xs, source, convention);
}

// ---------------------------------------------------------------------------
// Table of D_c(2; x) for c = 0.9 .. 0.2 and x = 10^6, 10^7, 2*10^7.

inline constexpr std::array<u64, 3> kTable1X = {1'000'000, 10'000'000, 20'000'000};
inline constexpr std::array<u64, 8> kTable1Tenths = {9, 8, 7, 6, 5, 4, 3, 2};
inline constexpr std::array<std::array<double, 3>, 8> kTable1Published = {{
    {3.661860, 3.305180, 3.196040},
    {1.141480, 0.945623, 0.908751},
    {0.494278, 0.435395, 0.426470},
    {0.311567, 0.274586, 0.267904},
    {0.276559, 0.259482, 0.255962},
    {0.264968, 0.252956, 0.250063},
    {0.225980, 0.247837, 0.247299},
    {0.151238, 0.195911, 0.197430},
}};
inline constexpr double kTable1Tolerance = 5e-4;

struct Table1Cell {
  Fraction c;
  u64 x = 0;
  double published = 0;
  std::array<u64, 4> counts{};
  std::array<double, 4> quotients{};
};

struct Table1Report {
  std::vector<Table1Cell> cells;  // row-major: c descending, then x ascending
  std::array<double, 4> max_deviation{};
  std::size_t best_variant = 0;

  const CountingConvention& best_convention() const { return kCountingVariants[best_variant]; }
  bool within_tolerance() const { return max_deviation[best_variant] <= kTable1Tolerance; }
};

inline Table1Report table1_reproduce(const SigmaSource& source, u64 limit = kTable1X.back()) {
  if (limit < kTable1X.back())
    fail(ErrorKind::capability, "the table needs a sieve limit of at least 20000000");
  const auto target = RationalTarget::make(2, 1);
  std::vector<ThresholdSpec> thresholds;
  for (u64 t : kTable1Tenths) thresholds.push_back(ThresholdSpec::power(Fraction::make(t, 10)));
  auto counts = count_variants(target, thresholds, kTable1X, source, true);

  Table1Report report;
  for (std::size_t r = 0; r < thresholds.size(); ++r) {
    for (std::size_t j = 0; j < kTable1X.size(); ++j) {
      Table1Cell cell{thresholds[r].parameter(), kTable1X[j], kTable1Published[r][j], counts[r][j], {}};
      for (std::size_t v = 0; v < 4; ++v) {
        cell.quotients[v] = *normalized_quotient(cell.counts[v], cell.x);
        report.max_deviation[v] = std::max(report.max_deviation[v], std::fabs(cell.quotients[v] - cell.published));
      }
      report.cells.push_back(cell);
    }
  }
  for (std::size_t v = 1; v < 4; ++v)
    if (report.max_deviation[v] < report.max_deviation[report.best_variant]) report.best_variant = v;
  return report;
}

inline std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

/// Aligned text table in the published layout, with the deviation of each
/// cell under the best variant.
inline std::string format_table1(const Table1Report& report) {
  const std::size_t v = report.best_variant;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-7s | %-34s | %-34s | %-34s\n", "k(y)", "x = 1,000,000", "x = 10,000,000",
                "x = 20,000,000");
  out += buf;
  out += std::string(8, '-') + ("+" + std::string(36, '-')) + ("+" + std::string(36, '-')) +
         ("+" + std::string(36, '-')) + "\n";
  for (std::size_t r = 0; r < kTable1Tenths.size(); ++r) {
    std::snprintf(buf, sizeof buf, "y^0.%-3llu", static_cast<unsigned long long>(kTable1Tenths[r]));
    out += buf;
    for (std::size_t j = 0; j < kTable1X.size(); ++j) {
      const auto& cell = report.cells[r * kTable1X.size() + j];
      std::snprintf(buf, sizeof buf, " | %s (ref %s, %+.1e)", format_fixed6(cell.quotients[v]).c_str(),
                    format_fixed6(cell.published).c_str(), cell.quotients[v] - cell.published);
      out += buf;
    }
    out += "\n";
  }
  out += "\nconvention: " + report.best_convention().label() + "\n";
  for (std::size_t i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "  %-20s max |deviation| = %.3e%s\n", kCountingVariants[i].label().c_str(),
                  report.max_deviation[i], i == v ? "  <- best" : "");
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Limit behaviour of W(l; y^c; x) / (x / log x).

struct LimitRow {
  u64 x = 0;
  u64 count = 0;
  double quotient = 0;
  /// l in Sigma: sum of 1/m over perfect m <= x, and |quotient - sum|
  double partial_series = 0;
  double deviation = 0;
  /// l not in Sigma: count / (a b^3 x^(2/3 + c))
  double normalized = 0;
};

struct LimitReport {
  RationalTarget target;
  ThresholdSpec threshold;
  bool in_sigma = false;
  std::vector<u64> members;
  std::vector<LimitRow> rows;
  /// in_sigma: quotient is below the partial series at the last checkpoint.
  bool undershoot = false;
  /// in_sigma: deviation nonincreasing across checkpoints.
  bool converging = false;
  /// not in_sigma: normalized / x^0.05 <= 10 at every checkpoint.
  bool bounded = false;
};

inline LimitReport theorem_limit_check(const RationalTarget& target, const ThresholdSpec& threshold,
                                       std::span<const u64> checkpoints, const SigmaSource& source) {
  if (threshold.kind() != ThresholdKind::power)
    fail(ErrorKind::invalid_argument, "limit check needs a power threshold");
  validate_checkpoints(checkpoints);
  if (checkpoints.front() < 2) fail(ErrorKind::invalid_argument, "limit check checkpoints must be >= 2");

  LimitReport report{target, threshold, false, {}, {}, false, true, true};
  std::vector<u64> count_at(checkpoints.size(), 0);
  std::vector<mpq_class> series_at(checkpoints.size());
  const u64 b = target.b();
  u64 count = 0;
  mpq_class partial = 0;
  std::size_t next = 0;
  source.for_each(1, checkpoints.back(), [&](u64 n, u64 sigma_n, const SigmaSegment&) {
    if (target.is_perfect(n, sigma_n)) {
      report.members.push_back(n);
      partial += mpq_class(1, static_cast<unsigned long>(n));
    }
    if (threshold.admits(Deviation::of(target.deviation(n, sigma_n)), Argument::of(n), b)) ++count;
    while (next < checkpoints.size() && checkpoints[next] == n) {
      count_at[next] = count;
      series_at[next] = partial;
      ++next;
    }
  });

  report.in_sigma = !report.members.empty();
  const long double c = threshold.parameter().to_long_double();
  const long double scale = static_cast<long double>(target.a()) * std::pow(static_cast<long double>(b), 3);
  for (std::size_t j = 0; j < checkpoints.size(); ++j) {
    LimitRow row;
    row.x = checkpoints[j];
    row.count = count_at[j];
    row.quotient = *normalized_quotient(row.count, row.x);
    long double x = static_cast<long double>(row.x);
    if (report.in_sigma) {
      series_at[j].canonicalize();
      row.partial_series = to_double(series_at[j]);
      row.deviation = std::fabs(row.quotient - row.partial_series);
      if (j > 0 && row.deviation > report.rows.back().deviation) report.converging = false;
    } else {
      row.normalized = static_cast<double>(static_cast<long double>(row.count) / (scale * std::pow(x, 2.0L / 3 + c)));
      if (row.normalized / std::pow(x, 0.05L) > 10) report.bounded = false;
    }
    report.rows.push_back(row);
  }
  if (report.in_sigma) {
    report.undershoot = report.rows.back().quotient < report.rows.back().partial_series;
    report.bounded = false;
  } else {
    report.converging = false;
  }
  return report;
}

}  // namespace wpn
