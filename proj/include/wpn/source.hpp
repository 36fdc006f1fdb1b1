#pragma once

#include <algorithm>
#include <filesystem>
#include <future>
#include <optional>
#include <vector>

#include "wpn/cache.hpp"
#include "wpn/sieve.hpp"

namespace wpn {

struct SourceOptions {
  u64 segment_length = kDefaultSegmentLength;
  unsigned threads = 1;
  std::optional<std::filesystem::path> cache_dir;
  bool write_cache = true;
  u64 budget = kDefaultSegmentBudget;
};

/// Streams sigma segments over a range in ascending order. Segments are
/// aligned to multiples of the segment length, so a given n always lands in
/// the same segment regardless of the requested range start. Up to
/// `threads` segments are sieved concurrently; the callback always sees
/// them in ascending order on the calling thread.
class SigmaSource {
 public:
  explicit SigmaSource(SourceOptions options = {}) : options_(std::move(options)) {
    if (options_.segment_length == 0) fail(ErrorKind::invalid_argument, "segment length must be positive");
    if (options_.segment_length > options_.budget)
      fail(ErrorKind::budget_exceeded, "segment length exceeds the memory budget");
    if (options_.threads == 0) options_.threads = 1;
  }

  const SourceOptions& options() const noexcept { return options_; }

  template <typename Fn>
  void for_each_segment(u64 lo, u64 hi, Fn&& fn) const {
    if (lo < 1 || hi < lo)
      fail(ErrorKind::invalid_argument,
           "invalid range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const SegmentedSieve sieve(hi, options_.budget);
    const u64 len = options_.segment_length;

    struct Span {
      u64 lo, hi, id;
    };
    std::vector<Span> spans;
    for (u64 id = (lo - 1) / len;; ++id) {
      u64 s_lo = std::max(lo, id * len + 1);
      u64 s_hi = std::min(hi, (id + 1) * len);
      spans.push_back({s_lo, s_hi, id});
      if (s_hi == hi) break;
    }

    auto build = [&](const Span& s) { return load_or_sieve(sieve, s.lo, s.hi, s.id); };
    const std::size_t batch = options_.threads;
    for (std::size_t i = 0; i < spans.size(); i += batch) {
      std::size_t end = std::min(spans.size(), i + batch);
      std::vector<std::future<SigmaSegment>> pending;
      for (std::size_t j = i + 1; j < end; ++j)
        pending.push_back(std::async(std::launch::async, build, spans[j]));
      SigmaSegment first = build(spans[i]);
      fn(static_cast<const SigmaSegment&>(first));
      for (auto& f : pending) {
        SigmaSegment seg = f.get();
        fn(static_cast<const SigmaSegment&>(seg));
      }
    }
  }

  /// Visits every n in [lo, hi] in ascending order as fn(n, sigma_n, segment).
  template <typename Fn>
  void for_each(u64 lo, u64 hi, Fn&& fn) const {
    for_each_segment(lo, hi, [&](const SigmaSegment& seg) {
      for (u64 n = seg.lo; n <= seg.hi; ++n) fn(n, seg.sigma[n - seg.lo], seg);
    });
  }

  /// Single segment covering [lo, hi]; subject to the budget.
  SigmaSegment segment(u64 lo, u64 hi) const {
    const SegmentedSieve sieve(hi, options_.budget);
    return load_or_sieve(sieve, lo, hi, 0);
  }

 private:
  SigmaSegment load_or_sieve(const SegmentedSieve& sieve, u64 lo, u64 hi, u64 id) const {
    if (!options_.cache_dir) return sieve.sieve(lo, hi, id);
    auto path = *options_.cache_dir / cache_file_name(lo, hi);
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) {
      SigmaSegment seg = read_cache(path);
      if (seg.lo != lo || seg.hi != hi) fail(ErrorKind::format, "cache file range mismatch: " + path.string());
      seg.segment_id = id;
      sieve.fill_spf(seg);
      return seg;
    }
    SigmaSegment seg = sieve.sieve(lo, hi, id);
    if (options_.write_cache) {
      std::filesystem::create_directories(*options_.cache_dir, ec);
      write_cache(seg, path);
    }
    return seg;
  }

  SourceOptions options_;
};

}  // namespace wpn
