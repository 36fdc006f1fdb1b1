#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "wpn/arith.hpp"

namespace wpn {

enum class Classification { regular, sporadic };

inline std::string_view to_string(Classification c) {
  return c == Classification::regular ? "regular" : "sporadic";
}

/// n = p * m with p prime, p not dividing m.
struct Witness {
  u64 p = 0;
  u64 m = 0;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct SolutionRecord {
  u64 n = 0;
  u64 sigma_n = 0;
  /// (b sigma(n) - k) / n when that is a nonnegative integer.
  std::optional<u64> q;
  Classification classification = Classification::sporadic;
  std::vector<Witness> witnesses;

  friend bool operator==(const SolutionRecord&, const SolutionRecord&) = default;
};

}  // namespace wpn
