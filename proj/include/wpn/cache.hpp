#pragma once

// On-disk sigma cache.
//
//   offset  size  field
//   0       4     magic "SGMA"
//   4       4     version (u32 LE)
//   8       8     lo (u64 LE)
//   16      8     hi (u64 LE)
//   24      8*N   sigma(lo..hi) (u64 LE each), N = hi - lo + 1
//   24+8N   4     CRC32 of the sigma payload (u32 LE)

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "wpn/error.hpp"
#include "wpn/sieve.hpp"

namespace wpn {

inline constexpr std::array<char, 4> kCacheMagic = {'S', 'G', 'M', 'A'};
inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr std::size_t kCacheHeaderSize = 24;

namespace detail {

template <typename T>
void put_le(std::vector<unsigned char>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

template <typename T>
T get_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

inline std::uint32_t crc32_of(const unsigned char* data, std::size_t len) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  while (len > 0) {
    auto chunk = static_cast<uInt>(std::min<std::size_t>(len, 1u << 30));
    crc = ::crc32(crc, data, chunk);
    data += chunk;
    len -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace detail

inline std::vector<unsigned char> encode_cache(const SigmaSegment& seg) {
  std::vector<unsigned char> out;
  out.reserve(kCacheHeaderSize + 8 * seg.size() + 4);
  out.insert(out.end(), kCacheMagic.begin(), kCacheMagic.end());
  detail::put_le<std::uint32_t>(out, kCacheVersion);
  detail::put_le<u64>(out, seg.lo);
  detail::put_le<u64>(out, seg.hi);
  for (u64 s : seg.sigma) detail::put_le<u64>(out, s);
  std::uint32_t crc = detail::crc32_of(out.data() + kCacheHeaderSize, out.size() - kCacheHeaderSize);
  detail::put_le<std::uint32_t>(out, crc);
  return out;
}

/// Decodes a cache image. The returned segment carries sigma only; the spf
/// column is left empty (see SegmentedSieve::fill_spf).
inline SigmaSegment decode_cache(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kCacheHeaderSize + 4 ||
      std::memcmp(bytes.data(), kCacheMagic.data(), kCacheMagic.size()) != 0)
    fail(ErrorKind::format, "not a sigma cache file (bad magic)");
  auto version = detail::get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kCacheVersion)
    fail(ErrorKind::version, "unsupported cache version " + std::to_string(version));
  SigmaSegment seg;
  seg.lo = detail::get_le<u64>(bytes.data() + 8);
  seg.hi = detail::get_le<u64>(bytes.data() + 16);
  if (seg.lo < 1 || seg.hi < seg.lo) fail(ErrorKind::format, "cache header has an invalid range");
  u64 count = seg.hi - seg.lo + 1;
  std::size_t payload = bytes.size() - kCacheHeaderSize - 4;
  if (count > payload / 8 || payload != count * 8)
    fail(ErrorKind::checksum, "cache payload length does not match its header (truncated?)");
  std::uint32_t stored = detail::get_le<std::uint32_t>(bytes.data() + kCacheHeaderSize + payload);
  if (stored != detail::crc32_of(bytes.data() + kCacheHeaderSize, payload))
    fail(ErrorKind::checksum, "cache checksum mismatch");
  seg.sigma.resize(count);
  for (u64 i = 0; i < count; ++i)
    seg.sigma[i] = detail::get_le<u64>(bytes.data() + kCacheHeaderSize + 8 * i);
  return seg;
}

inline void write_cache(const SigmaSegment& seg, const std::filesystem::path& path) {
  auto bytes = encode_cache(seg);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::io, "cannot move cache into place: " + ec.message());
}

inline SigmaSegment read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_cache(bytes);
}

/// Write-then-read; the returned segment has the same sigma column.
inline SigmaSegment cache_roundtrip(const SigmaSegment& seg, const std::filesystem::path& path) {
  write_cache(seg, path);
  return read_cache(path);
}

inline std::filesystem::path cache_file_name(u64 lo, u64 hi) {
  return "sigma_" + std::to_string(lo) + "_" + std::to_string(hi) + ".sgma";
}

}  // namespace wpn
