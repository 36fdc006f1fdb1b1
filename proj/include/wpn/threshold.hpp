#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "wpn/arith.hpp"
#include "wpn/bignum.hpp"
#include "wpn/rational.hpp"

namespace wpn {

enum class ThresholdKind { power, constant, linear, x_over_log, y_log_y, custom_table };

/// k(y) = value for y >= from, until the next step.
struct TableStep {
  u64 from;
  Fraction value;
};

/// |b sigma(n) - a n| with its natural log cached.
struct Deviation {
  u128 value = 0;
  long double log_value = -std::numeric_limits<long double>::infinity();

  static Deviation of(u128 v) {
    return Deviation{v, v == 0 ? -std::numeric_limits<long double>::infinity()
                               : std::log(static_cast<long double>(v))};
  }
};

/// Threshold argument y (n for W, x for the W-tilde variant) with its log.
struct Argument {
  u64 y = 1;
  long double log_y = 0;

  static Argument of(u64 y) { return Argument{y, std::log(static_cast<long double>(y))}; }
};

/// Threshold function k(y) in |b sigma(n) - a n| < b k(y).
///
/// Comparisons are exact: rational kinds cross-multiply in integers, the
/// power kind y^(p/q) compares dev^q against b^q y^p, and the two
/// transcendental kinds fall back to 256-bit MPFR whenever the long double
/// estimate is within 1e-12 (in log space) of the boundary. For the
/// transcendental kinds k(1) is taken to be 1, since y/log y and y log y
/// are undefined or zero there.
class ThresholdSpec {
 public:
  static constexpr u64 kMaxPowerDenominator = 10;

  static ThresholdSpec power(Fraction c) {
    if (c.num == 0 || c.num >= c.den)
      fail(ErrorKind::invalid_argument, "power exponent must lie in (0,1), got " + c.to_string());
    if (c.den > kMaxPowerDenominator)
      fail(ErrorKind::invalid_argument,
           "power exponent denominator must be <= 10, got " + c.to_string());
    return ThresholdSpec(ThresholdKind::power, c);
  }
  static ThresholdSpec constant(Fraction k0) {
    if (k0.num == 0) fail(ErrorKind::invalid_argument, "constant threshold must be positive");
    return ThresholdSpec(ThresholdKind::constant, k0);
  }
  static ThresholdSpec linear(Fraction c) {
    if (c.num == 0) fail(ErrorKind::invalid_argument, "linear threshold slope must be positive");
    return ThresholdSpec(ThresholdKind::linear, c);
  }
  static ThresholdSpec x_over_log() { return ThresholdSpec(ThresholdKind::x_over_log, {1, 1}); }
  static ThresholdSpec y_log_y() { return ThresholdSpec(ThresholdKind::y_log_y, {1, 1}); }
  static ThresholdSpec custom_table(std::vector<TableStep> steps) {
    if (steps.empty() || steps.front().from != 1)
      fail(ErrorKind::invalid_argument, "threshold table must start at y = 1");
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i].value.num == 0) fail(ErrorKind::invalid_argument, "threshold table values must be positive");
      if (i > 0 && steps[i].from <= steps[i - 1].from)
        fail(ErrorKind::invalid_argument, "threshold table breakpoints must be strictly ascending");
    }
    ThresholdSpec spec(ThresholdKind::custom_table, {1, 1});
    spec.table_ = std::move(steps);
    return spec;
  }

  /// Grammar: pow:<c> | const:<k0> | lin:<c> | xlog | ylogy |
  /// table:<y>=<k>,<y>=<k>,...  where numbers are exact fractions or decimals.
  static ThresholdSpec parse(std::string_view text) {
    auto colon = text.find(':');
    std::string_view head = text.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (head == "pow" || head == "power") return power(parse_fraction(arg));
    if (head == "const" || head == "constant") return constant(parse_fraction(arg));
    if (head == "lin" || head == "linear") return linear(parse_fraction(arg));
    if (head == "xlog" || head == "x_over_log") return x_over_log();
    if (head == "ylogy" || head == "y_log_y") return y_log_y();
    if (head == "table") {
      std::vector<TableStep> steps;
      while (!arg.empty()) {
        auto comma = arg.find(',');
        std::string_view item = arg.substr(0, comma);
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
          fail(ErrorKind::invalid_argument, "threshold table entry needs y=k: '" + std::string(item) + "'");
        Fraction y = parse_fraction(item.substr(0, eq));
        if (!y.is_integer()) fail(ErrorKind::invalid_argument, "table breakpoints must be integers");
        steps.push_back({y.num, parse_fraction(item.substr(eq + 1))});
        arg = comma == std::string_view::npos ? std::string_view{} : arg.substr(comma + 1);
      }
      return custom_table(std::move(steps));
    }
    fail(ErrorKind::invalid_argument, "unknown threshold '" + std::string(text) + "'");
  }

  ThresholdKind kind() const noexcept { return kind_; }
  Fraction parameter() const noexcept { return param_; }
  const std::vector<TableStep>& table() const noexcept { return table_; }
  bool strict() const noexcept { return strict_; }
  ThresholdSpec with_strict(bool strict) const {
    ThresholdSpec copy = *this;
    copy.strict_ = strict;
    return copy;
  }

  std::string label() const {
    switch (kind_) {
      case ThresholdKind::power: return "pow:" + param_.to_string();
      case ThresholdKind::constant: return "const:" + param_.to_string();
      case ThresholdKind::linear: return "lin:" + param_.to_string();
      case ThresholdKind::x_over_log: return "xlog";
      case ThresholdKind::y_log_y: return "ylogy";
      case ThresholdKind::custom_table: {
        std::string s = "table:";
        for (std::size_t i = 0; i < table_.size(); ++i) {
          if (i) s += ",";
          s += std::to_string(table_[i].from) + "=" + table_[i].value.to_string();
        }
        return s;
      }
    }
    return "?";
  }

  /// Approximate k(y), for reporting.
  long double value(u64 y) const {
    long double ly = std::log(static_cast<long double>(y));
    switch (kind_) {
      case ThresholdKind::power: return std::exp(param_.to_long_double() * ly);
      case ThresholdKind::constant: return param_.to_long_double();
      case ThresholdKind::linear: return param_.to_long_double() * static_cast<long double>(y);
      case ThresholdKind::x_over_log: return y == 1 ? 1.0L : static_cast<long double>(y) / ly;
      case ThresholdKind::y_log_y: return y == 1 ? 1.0L : static_cast<long double>(y) * ly;
      case ThresholdKind::custom_table: return step_at(y).to_long_double();
    }
    return 0;
  }

  /// Three-way comparison of dev against scale * k(y).
  std::strong_ordering compare(const Deviation& dev, const Argument& arg, u64 scale) const {
    switch (kind_) {
      case ThresholdKind::constant:
        return compare_products(dev.value, param_.den, scale, param_.num);
      case ThresholdKind::linear:
        return compare_products(dev.value, param_.den, static_cast<u128>(scale) * param_.num, arg.y);
      case ThresholdKind::custom_table: {
        Fraction k = step_at(arg.y);
        return compare_products(dev.value, k.den, scale, k.num);
      }
      case ThresholdKind::power:
        return compare_power(dev, arg, scale);
      case ThresholdKind::x_over_log:
      case ThresholdKind::y_log_y:
        return compare_transcendental(dev, arg, scale);
    }
    return std::strong_ordering::equal;
  }

  /// dev < scale k(y), or <= when the spec is non-strict.
  bool admits(const Deviation& dev, const Argument& arg, u64 scale) const {
    auto c = compare(dev, arg, scale);
    return strict_ ? c < 0 : c <= 0;
  }

 private:
  static constexpr long double kLogMargin = 1e-12L;

  ThresholdSpec(ThresholdKind kind, Fraction param) : kind_(kind), param_(param) {}

  Fraction step_at(u64 y) const {
    auto it = std::upper_bound(table_.begin(), table_.end(), y,
                               [](u64 v, const TableStep& s) { return v < s.from; });
    return std::prev(it)->value;
  }

  std::strong_ordering compare_power(const Deviation& dev, const Argument& arg, u64 scale) const {
    if (dev.value == 0) return std::strong_ordering::less;
    const u64 p = param_.num, q = param_.den;
    long double rhs = std::log(static_cast<long double>(scale)) +
                      static_cast<long double>(p) / static_cast<long double>(q) * arg.log_y;
    long double diff = dev.log_value - rhs;
    if (diff < -kLogMargin) return std::strong_ordering::less;
    if (diff > kLogMargin) return std::strong_ordering::greater;
    // dev^q vs scale^q * y^p
    mpz_class lhs, right, base;
    mpz_pow_ui(lhs.get_mpz_t(), to_mpz(dev.value).get_mpz_t(), q);
    mpz_class sc = static_cast<unsigned long>(scale), yy = static_cast<unsigned long>(arg.y);
    mpz_pow_ui(right.get_mpz_t(), sc.get_mpz_t(), q);
    mpz_pow_ui(base.get_mpz_t(), yy.get_mpz_t(), p);
    right *= base;
    return to_ordering(cmp(lhs, right));
  }

  std::strong_ordering compare_transcendental(const Deviation& dev, const Argument& arg, u64 scale) const {
    if (arg.y == 1) return compare_products(dev.value, 1, scale, 1);
    if (dev.value == 0) return std::strong_ordering::less;
    const bool over_log = kind_ == ThresholdKind::x_over_log;
    long double log_log = std::log(arg.log_y);
    long double rhs = std::log(static_cast<long double>(scale)) + arg.log_y + (over_log ? -log_log : log_log);
    long double diff = dev.log_value - rhs;
    if (diff < -kLogMargin) return std::strong_ordering::less;
    if (diff > kLogMargin) return std::strong_ordering::greater;
    Real d(to_mpz(dev.value));
    Real y = Real::from_u64(arg.y);
    Real ly = log(y);
    Real k = over_log ? y / ly : y * ly;
    return to_ordering(cmp(d, Real::from_u64(scale) * k));
  }

  ThresholdKind kind_;
  Fraction param_;
  std::vector<TableStep> table_;
  bool strict_ = true;
};

}  // namespace wpn
