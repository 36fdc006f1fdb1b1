#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wpn/arith.hpp"
#include "wpn/error.hpp"

namespace wpn {

/// count / (x / log x), natural log; undefined below x = 2.
inline std::optional<double> normalized_quotient(u64 count, u64 x) {
  if (x < 2) return std::nullopt;
  long double lx = static_cast<long double>(x);
  return static_cast<double>(static_cast<long double>(count) * std::log(lx) / lx);
}

struct CheckpointRow {
  u64 x = 0;
  u64 count = 0;
  std::optional<double> quotient;

  friend bool operator==(const CheckpointRow&, const CheckpointRow&) = default;
};

using CheckpointSeries = std::vector<CheckpointRow>;

inline void validate_checkpoints(std::span<const u64> checkpoints) {
  if (checkpoints.empty()) fail(ErrorKind::invalid_argument, "at least one checkpoint is required");
  if (checkpoints.front() < 1) fail(ErrorKind::invalid_argument, "checkpoints must be >= 1");
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] <= checkpoints[i - 1])
      fail(ErrorKind::invalid_argument, "checkpoints must be strictly ascending");
}

/// Every integer in [from, to].
inline std::vector<u64> integer_checkpoints(u64 from, u64 to) {
  std::vector<u64> xs;
  for (u64 x = from; x <= to; ++x) xs.push_back(x);
  return xs;
}

/// Roughly `count` log-spaced integers in [from, to], deduplicated, always
/// including both ends.
inline std::vector<u64> log_spaced_checkpoints(u64 from, u64 to, std::size_t count) {
  if (from < 1 || to < from || count < 2) fail(ErrorKind::invalid_argument, "bad log-spaced checkpoint request");
  std::vector<u64> xs;
  long double a = std::log(static_cast<long double>(from)), b = std::log(static_cast<long double>(to));
  for (std::size_t i = 0; i < count; ++i) {
    long double t = a + (b - a) * static_cast<long double>(i) / static_cast<long double>(count - 1);
    u64 x = static_cast<u64>(std::llround(std::exp(t)));
    x = std::clamp(x, from, to);
    if (xs.empty() || x > xs.back()) xs.push_back(x);
  }
  if (xs.back() != to) xs.push_back(to);
  return xs;
}

}  // namespace wpn
