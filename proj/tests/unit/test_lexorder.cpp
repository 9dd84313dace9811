#include <gtest/gtest.h>

#include "rankkit/lexorder.hpp"

using namespace rankkit;
using namespace rankkit::literals;

TEST(RankSigmaStar, SmallValues) {
  EXPECT_EQ(rank_sigma_star("eps"_b), 1);
  EXPECT_EQ(rank_sigma_star("01"_b), 5);
  EXPECT_EQ(rank_sigma_star("111"_b), 15);
}

TEST(RankSigmaStar, CountsStringsBelow) {
  std::uint64_t n = 0;
  for_each_upto(9, [&](const BStr& x) {
    ++n;
    ASSERT_EQ(rank_sigma_star(x), n) << x.str();
  });
}

TEST(Unrank, InvertsRank) {
  EXPECT_EQ(unrank(1), BStr{});
  EXPECT_EQ(unrank(5), "01"_b);
  EXPECT_EQ(unrank(2), "0"_b);
  for (int n = 1; n <= (1 << 14); ++n) ASSERT_EQ(rank_sigma_star(unrank(n)), n);
  for_each_upto(13, [](const BStr& x) { ASSERT_EQ(unrank(rank_sigma_star(x)), x); });
}

TEST(Unrank, ZeroIsOutsideTheDomain) { EXPECT_THROW(unrank(0), domain_error); }

TEST(Shift, PaperExampleAndClamping) {
  EXPECT_EQ(shift(BStr{}, 4), "01"_b);
  EXPECT_EQ(shift("0110"_b, 0), "0110"_b);
  EXPECT_EQ(shift("0"_b, -7), BStr{});
}

TEST(Shift, ComposesWithoutClamping) {
  for_each_upto(8, [](const BStr& x) {
    const long long ix = static_cast<long long>(index_u64(x));
    for (long long a : {-5LL, -1LL, 0LL, 3LL, 17LL})
      for (long long b : {-4LL, 0LL, 2LL, 9LL}) {
        if (ix + a < 0 || ix + a + b < 0) continue;
        ASSERT_EQ(shift(shift(x, a), b), shift(x, a + b)) << x.str() << " " << a << " " << b;
      }
  });
}

TEST(ShortlexCmp, Examples) {
  EXPECT_EQ(shortlex_cmp("1"_b, "00"_b), std::strong_ordering::less);
  EXPECT_EQ(shortlex_cmp("01"_b, "01"_b), std::strong_ordering::equal);
  EXPECT_EQ(shortlex_cmp("10"_b, "01"_b), std::strong_ordering::greater);
}

TEST(ShortlexCmp, AgreesWithRanks) {
  std::vector<BStr> all;
  for_each_upto(6, [&](const BStr& x) { all.push_back(x); });
  for (const auto& x : all)
    for (const auto& y : all)
      ASSERT_EQ(x < y, rank_sigma_star(x) < rank_sigma_star(y)) << x.str() << " " << y.str();
}

TEST(BStr, TextForm) {
  EXPECT_EQ(BStr{}.str(), "eps");
  EXPECT_EQ(BStr::parse("eps"), BStr{});
  EXPECT_THROW(BStr::parse("012"), domain_error);
  EXPECT_THROW(BStr::parse(""), domain_error);
}

TEST(Advance, IsSuccessor) {
  BStr x;
  for (int i = 0; i < 500; ++i) {
    BStr y = x;
    advance(y);
    ASSERT_EQ(y, shift(x, 1));
    x = y;
  }
}

TEST(Numeral, RoundTrip) {
  for_each_of_length(7, [](const BStr& x) { ASSERT_EQ(from_numeral(numeral(x), 7), x); });
}
