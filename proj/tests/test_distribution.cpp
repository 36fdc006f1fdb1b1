#include <cmath>

#include <gtest/gtest.h>

#include "wpn/distribution.hpp"

using namespace wpn;

namespace {

SigmaSource small_source() {
  SourceOptions opts;
  opts.segment_length = 1 << 15;
  return SigmaSource(opts);
}

u64 brute_cdf_count(u64 x, const Fraction& u, bool inclusive) {
  u64 c = 0;
  for (u64 n = 1; n <= x; ++n) {
    u128 lhs = static_cast<u128>(sigma_oracle(n)) * u.den, rhs = static_cast<u128>(u.num) * n;
    if (inclusive ? lhs <= rhs : lhs < rhs) ++c;
  }
  return c;
}

}  // namespace

TEST(EmpiricalCdf, TiesAtTwo) {
  std::vector<Fraction> grid{{2, 1}};
  auto incl = empirical_cdf(10, grid, small_source(), true);
  auto excl = empirical_cdf(10, grid, small_source(), false);
  EXPECT_EQ(incl.points[0].count, 10u);  // only 6 is a tie, no n <= 10 is abundant
  EXPECT_EQ(excl.points[0].count, 9u);
  EXPECT_DOUBLE_EQ(incl.points[0].value, 1.0);
  EXPECT_EQ(incl.points[0].u, "2");
}

TEST(EmpiricalCdf, MatchesBruteForceAndIsMonotone) {
  std::vector<Fraction> grid;
  for (u64 t = 10; t <= 40; ++t) grid.push_back(Fraction::make(t, 10));
  for (bool inclusive : {true, false}) {
    auto cdf = empirical_cdf(5000, grid, small_source(), inclusive);
    ASSERT_EQ(cdf.points.size(), grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      ASSERT_EQ(cdf.points[j].count, brute_cdf_count(5000, grid[j], inclusive)) << grid[j].to_string();
      if (j > 0) ASSERT_GE(cdf.points[j].count, cdf.points[j - 1].count);
      ASSERT_GE(cdf.points[j].value, 0.0);
      ASSERT_LE(cdf.points[j].value, 1.0);
    }
  }
}

TEST(EmpiricalCdf, RejectsBadGrids) {
  std::vector<Fraction> unsorted{{3, 1}, {2, 1}};
  EXPECT_THROW(empirical_cdf(10, unsorted, small_source()), Error);
  std::vector<Fraction> empty;
  EXPECT_THROW(empirical_cdf(10, empty, small_source()), Error);
  std::vector<Fraction> ok{{2, 1}};
  EXPECT_THROW(empirical_cdf(0, ok, small_source()), Error);
}

TEST(EmpiricalCdf, RealGridAgreesWithRationalGrid) {
  std::vector<Fraction> frac{{1, 1}, {3, 2}, {2, 1}, {5, 2}, {3, 1}};
  std::vector<Real> real;
  for (const auto& f : frac) real.push_back(Real::parse(f.to_string()));
  auto a = empirical_cdf(20000, frac, small_source(), true);
  auto b = empirical_cdf(20000, std::span<const Real>(real), small_source());
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t j = 0; j < frac.size(); ++j) EXPECT_EQ(a.points[j].count, b.points[j].count) << j;
}

TEST(EmpiricalCdf, IrrationalPoint) {
  std::vector<Real> grid{pow(Real::parse("2"), Real::parse("0.5"))};  // sqrt 2
  auto cdf = empirical_cdf(3000, std::span<const Real>(grid), small_source());
  u64 expected = 0;
  for (u64 n = 1; n <= 3000; ++n) {
    u64 s = sigma_oracle(n);
    if (s * s <= 2 * n * n) ++expected;
  }
  EXPECT_EQ(cdf.points[0].count, expected);
}

TEST(Phase, SublinearDensityFalls) {
  auto r = phase_experiment(RationalTarget::make(2, 1), {Regime::sublinear, {1, 2}},
                            std::vector<u64>{1000, 10000, 100000}, small_source());
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.expectation_met);
  EXPECT_LT(r.rows.back().density, r.rows.front().density);
  EXPECT_FALSE(r.rows[0].reference.has_value());
}

TEST(Phase, LinearMatchesCdfWindow) {
  auto r = phase_experiment(RationalTarget::make(2, 1), {Regime::linear, {1, 10}},
                            std::vector<u64>{1000, 10000, 100000}, small_source());
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.reference_count.has_value());
    // strict |sigma/n - 2| < 0.1 is exactly the open window
    EXPECT_DOUBLE_EQ(row.density, *row.reference_open);
    // cross-check the closed window with the CDF routine
    std::vector<Fraction> grid{{19, 10}, {21, 10}};
    auto cdf = empirical_cdf(row.x, grid, small_source(), true);
    EXPECT_EQ(*row.reference_count, cdf.points[1].count - cdf.points[0].count);
    // the closed window only adds n with sigma(n)/n = 21/10 exactly
    u64 ties = 0;
    for (u64 n = 1; n <= row.x; ++n) ties += 10 * sigma_oracle(n) == 21 * n;
    EXPECT_EQ(*row.reference_count - row.count, ties) << row.x;
  }
  // one tie in 1000 is a gap of exactly 1e-3, still within tolerance
  EXPECT_DOUBLE_EQ(r.max_reference_gap, 1e-3);
  EXPECT_TRUE(r.expectation_met);
}

TEST(Phase, SuperlinearDensityNearOne) {
  auto r = phase_experiment(RationalTarget::make(2, 1), {Regime::superlinear, {1, 1}},
                            std::vector<u64>{1000, 10000, 100000}, small_source());
  EXPECT_TRUE(r.expectation_met);
  EXPECT_GT(r.rows.back().density, 0.9);
}

TEST(Probe, ExactHitAtTwo) {
  auto r = sigma_approx_probe(Real(2), 1, 100, small_source());
  ASSERT_EQ(r.hits.size(), 1u);
  EXPECT_EQ(r.hits[0].m, 6u);
  EXPECT_EQ(r.hits[0].ratio, (Fraction{2, 1}));
  EXPECT_TRUE(r.hits[0].distance == Real(0));
  EXPECT_TRUE(r.hits[0].within_inverse_log);
}

TEST(Probe, FrozenBestApproximations) {
  auto r = sigma_approx_probe(Real::parse("1.7"), 4, 10000, small_source());
  ASSERT_EQ(r.hits.size(), 4u);
  EXPECT_EQ(r.hits[0].search_limit, 10u);
  EXPECT_EQ(r.hits[1].search_limit, 100u);
  EXPECT_EQ(r.hits.back().search_limit, 10000u);
  EXPECT_EQ(r.hits.back().m, 4335u);
  EXPECT_EQ(r.hits.back().ratio, (Fraction{2456, 1445}));
  EXPECT_NEAR(r.hits.back().distance.to_double(), 3.4602e-4, 1e-8);
  for (std::size_t i = 1; i < r.hits.size(); ++i)
    EXPECT_FALSE(r.hits[i - 1].distance < r.hits[i].distance);

  // sigma(1)/1 = 1 beats every 1 + 1/p here
  auto near_one = sigma_approx_probe(Real::parse("1.000001"), 1, 10000, small_source());
  EXPECT_EQ(near_one.hits[0].m, 1u);
  // only primes come this close to 1; 1 + 1/4999 is nearest to 1.0002
  auto prime = sigma_approx_probe(Real::parse("1.0002"), 1, 10000, small_source());
  EXPECT_EQ(prime.hits[0].m, 4999u);
  EXPECT_TRUE(abs(prime.hits[0].distance - Real::parse("1/24995000")) < Real::parse("1e-70"));  // 1/4999 - 1/5000
}

TEST(Probe, RejectsBadInput) {
  EXPECT_THROW(sigma_approx_probe(Real(1), 1, 10, small_source()), Error);
  EXPECT_THROW(sigma_approx_probe(Real(2), 0, 10, small_source()), Error);
}

TEST(EmpiricalCdf, TwoScaleStability) {
  std::vector<Fraction> grid{{3, 2}, {2, 1}, {5, 2}, {3, 1}};
  auto small = empirical_cdf(1'000'000, grid, small_source());
  auto large = empirical_cdf(10'000'000, grid, small_source());
  for (std::size_t j = 0; j < grid.size(); ++j)
    EXPECT_LT(std::fabs(small.points[j].value - large.points[j].value), 0.01) << grid[j].to_string();
}
