#include <gtest/gtest.h>

#include "rankkit/combinators.hpp"
#include "rankkit/constructions.hpp"
#include "rankkit/sets.hpp"
#include "rankkit/setmodel.hpp"

using namespace rankkit;
using namespace rankkit::literals;

namespace {

RankedSet off_by_one(RankedSet s) {
  auto r = std::get<StrongRanker>(*s.ranker);
  s.ranker = Ranker{StrongRanker{[r](const BStr& x) { return r(x) + 1; }}};
  return s;
}

}  // namespace

TEST(BruteRank, Examples) {
  EXPECT_EQ(brute_rank(sigma_star_member(), "01"_b), 5);
  EXPECT_EQ(brute_rank([](const BStr&) { return false; }, "111"_b), 0);
  EXPECT_EQ(brute_rank(sets::ends_in_one().member, "11"_b), 3);
}

TEST(BruteRank, TableAgrees) {
  auto m = sets::even_length().member;
  BruteRankTable t(m, 8);
  for_each_upto(8, [&](const BStr& x) { ASSERT_EQ(brute_rank(m, x), t.rank(x)); });
}

TEST(VerifyStrong, CleanAndFaulty) {
  EXPECT_TRUE(verify_strong(sets::sigma_star(), 8).clean());
  EXPECT_TRUE(verify_strong(sets::beacons(), 8).clean());
  EXPECT_FALSE(verify_strong(off_by_one(sets::beacons()), 4).clean());
}

TEST(VerifyStrong, NeedsStrongRanker) {
  EXPECT_THROW(verify_strong(padded_witness_language(toy_witnesses()[0], {1, 1}), 4),
               configuration_error);
  RankedSet bare{"bare", sigma_star_member(), std::nullopt, std::nullopt, std::nullopt};
  EXPECT_THROW(verify_strong(bare, 4), configuration_error);
}

TEST(VerifySemistrong, Examples) {
  Polynomial p{1, 1};
  EXPECT_TRUE(verify_semistrong(padded_witness_language(toy_witnesses()[0], p), p(3) + 4).clean());
  auto s = sets::ends_in_one();
  s.ranker = Ranker{as_semistrong(std::get<StrongRanker>(*s.ranker), s.member)};
  EXPECT_TRUE(verify_semistrong(s, 6).clean());
  auto r = verify_semistrong(s, 0);
  EXPECT_EQ(r.checked, 1u);
}

TEST(VerifySemistrong, CatchesRankOnNonmember) {
  auto s = sets::ends_in_one();
  auto strong = std::get<StrongRanker>(*s.ranker);
  s.ranker = Ranker{SemistrongRanker{[strong](const BStr& x) -> RankOrOut { return strong(x); }}};
  EXPECT_FALSE(verify_semistrong(s, 4).clean());
}

TEST(VerifyWeak, IgnoresNonmembers) {
  RankedSet paired{"paired", paired_member(2, [](const BStr& x) { return x.size() % 2; }),
                   Ranker{paired_weak_ranker(2)}, std::nullopt, std::nullopt};
  EXPECT_TRUE(verify_weak(paired, 8).clean());
  EXPECT_TRUE(verify_weak(sets::sigma_star(), 6).clean());
  auto s = sets::ends_in_one();
  auto strong = std::get<StrongRanker>(*s.ranker);
  s.ranker = Ranker{WeakRanker{[strong, m = s.member](const BStr& x) {
    return m(x) ? strong(x) : Rank(999);
  }}};
  EXPECT_TRUE(verify_weak(s, 6).clean());
  s.ranker = Ranker{WeakRanker{[strong](const BStr& x) { return strong(x) + 1; }}};
  EXPECT_FALSE(verify_weak(s, 6).clean());
}

TEST(VerifyCompression, IdentityAndCollision) {
  EXPECT_TRUE(verify_compression(sets::sigma_star(), sigma_star_member(), 8).clean());
  auto s = sets::sigma_star();
  s.compressor = Compression{total([](const BStr& x) { return x == "1"_b ? "0"_b : x; }),
                             total([](const BStr& x) { return x; })};
  EXPECT_FALSE(verify_compression(s, sigma_star_member(), 4).clean());
}

TEST(VerifyCompression, MissingWitnessIsNoted) {
  auto s = sets::sigma_star();
  s.compressor = Compression{total([](const BStr& x) { return x; }), std::nullopt};
  auto r = verify_compression(s, sigma_star_member(), 4);
  EXPECT_TRUE(r.clean());
  EXPECT_FALSE(r.notes.empty());
}

TEST(RankToCompression, Examples) {
  auto c = rank_to_compression(Ranker{sigma_star_ranker()});
  EXPECT_EQ(*c("01"_b), "01"_b);
  EXPECT_EQ(*rank_to_compression(Ranker{zero_ranker()})("0101"_b), BStr{});
  EXPECT_EQ(*rank_to_compression(*sets::beacons().ranker)("0000"_b), "1"_b);
}

TEST(RankToCompression, WeakRankerGivesCompression) {
  RankedSet paired{"paired", paired_member(4, [](const BStr& x) { return x.size(); }),
                   Ranker{paired_weak_ranker(4)}, std::nullopt, std::nullopt};
  ASSERT_TRUE(verify_weak(paired, 8).clean());
  paired.compressor = rank_to_compression(*paired.ranker, paired.member);
  EXPECT_TRUE(verify_compression(paired, sigma_star_member(), 6).clean());
}

TEST(PartialFn, StepMonotone) {
  for (const auto& f : catalog::shipped()) {
    for_each_upto(8, [&](const BStr& x) {
      std::optional<BStr> first;
      for (std::uint64_t s = 1; s <= 256; s *= 2) {
        auto v = f(x, s);
        if (first) ASSERT_EQ(v, first) << f.name << " " << x.str() << " " << s;
        if (v) first = v;
      }
    });
  }
}

TEST(PartialFn, CatalogByName) {
  EXPECT_EQ(catalog::by_name("shift:2")("eps"_b, 10), "1"_b);
  EXPECT_FALSE(catalog::by_name("divergent")("0"_b, 1000));
  EXPECT_FALSE(catalog::by_name("diverge_even")("00"_b, 1000));
  EXPECT_TRUE(catalog::by_name("diverge_even")("000"_b, 1000));
  EXPECT_THROW(catalog::by_name("nope"), configuration_error);
  EXPECT_EQ(catalog::parse_list("shipped").size(), 5u);
}

TEST(MemberScanner, NthAndCount) {
  MemberScanner s(sets::ends_in_one().member, 10);
  EXPECT_EQ(*s.nth(1), "1"_b);
  EXPECT_EQ(*s.nth(3), "11"_b);
  EXPECT_EQ(s.count_le("100"_b), 5u);
  EXPECT_FALSE(MemberScanner(sets::zeros().member, 3).nth(5));
}
