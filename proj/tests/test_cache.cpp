#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "wpn/cache.hpp"
#include "wpn/source.hpp"

using namespace wpn;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("wpn_cache_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorKind kind_of_read(const fs::path& p) {
  try {
    read_cache(p);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::invalid_argument;
}

std::vector<unsigned char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST(Cache, RoundtripIsBitExact) {
  auto dir = scratch_dir("roundtrip");
  auto seg = sieve_segment(1, 1000);
  auto back = cache_roundtrip(seg, dir / "a.sgma");
  EXPECT_EQ(back.lo, 1u);
  EXPECT_EQ(back.hi, 1000u);
  EXPECT_EQ(back.sigma, seg.sigma);
  EXPECT_TRUE(back.spf.empty());
  SegmentedSieve(1000).fill_spf(back);
  EXPECT_EQ(back.spf, seg.spf);
}

TEST(Cache, HeaderLayout) {
  auto seg = sieve_segment(7, 9);
  auto bytes = encode_cache(seg);
  ASSERT_EQ(bytes.size(), 24u + 3 * 8 + 4);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SGMA");
  EXPECT_EQ(bytes[4], 1);  // version, little endian
  EXPECT_EQ(bytes[8], 7);  // lo
  EXPECT_EQ(bytes[16], 9);  // hi
  EXPECT_EQ(bytes[24], 8);  // sigma(7)
  EXPECT_EQ(bytes[32], 15);  // sigma(8)
  EXPECT_EQ(bytes[40], 13);  // sigma(9)
}

TEST(Cache, TruncatedFileRejected) {
  auto dir = scratch_dir("truncated");
  write_cache(sieve_segment(1, 1000), dir / "t.sgma");
  auto bytes = slurp(dir / "t.sgma");
  bytes.resize(bytes.size() - 13);
  spit(dir / "t.sgma", bytes);
  EXPECT_EQ(kind_of_read(dir / "t.sgma"), ErrorKind::checksum);
}

TEST(Cache, CorruptedPayloadRejected) {
  auto dir = scratch_dir("corrupt");
  write_cache(sieve_segment(1, 1000), dir / "c.sgma");
  auto bytes = slurp(dir / "c.sgma");
  bytes[100] ^= 0x40;
  spit(dir / "c.sgma", bytes);
  EXPECT_EQ(kind_of_read(dir / "c.sgma"), ErrorKind::checksum);
}

TEST(Cache, WrongMagicRejected) {
  auto dir = scratch_dir("magic");
  write_cache(sieve_segment(1, 100), dir / "m.sgma");
  auto bytes = slurp(dir / "m.sgma");
  bytes[0] = 'X';
  spit(dir / "m.sgma", bytes);
  EXPECT_EQ(kind_of_read(dir / "m.sgma"), ErrorKind::format);
}

TEST(Cache, VersionMismatchRejected) {
  auto dir = scratch_dir("version");
  write_cache(sieve_segment(1, 100), dir / "v.sgma");
  auto bytes = slurp(dir / "v.sgma");
  bytes[4] = 2;
  spit(dir / "v.sgma", bytes);
  EXPECT_EQ(kind_of_read(dir / "v.sgma"), ErrorKind::version);
}

TEST(Cache, MissingFileIsIoError) {
  EXPECT_EQ(kind_of_read("/nonexistent/dir/x.sgma"), ErrorKind::io);
}

TEST(Cache, SourceWritesThenReuses) {
  auto dir = scratch_dir("source");
  SourceOptions opts;
  opts.segment_length = 4096;
  opts.cache_dir = dir;
  SigmaSource source(opts);
  std::vector<u64> first, second;
  source.for_each(1, 10000, [&](u64, u64 s, const SigmaSegment&) { first.push_back(s); });
  EXPECT_TRUE(fs::exists(dir / cache_file_name(1, 4096)));
  EXPECT_TRUE(fs::exists(dir / cache_file_name(8193, 10000)));

  // Second pass reads from disk; spf must be rebuilt identically.
  std::vector<u64> spf;
  source.for_each_segment(1, 10000, [&](const SigmaSegment& seg) {
    for (u64 n = seg.lo; n <= seg.hi; ++n) {
      second.push_back(seg.sigma_at(n));
      spf.push_back(seg.spf_at(n));
    }
  });
  EXPECT_EQ(first, second);
  auto fresh = sieve_segment(1, 10000);
  EXPECT_EQ(spf, fresh.spf);
}
