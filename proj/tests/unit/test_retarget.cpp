#include <gtest/gtest.h>

#include "rankkit/retarget.hpp"
#include "rankkit/sets.hpp"

using namespace rankkit;
using namespace rankkit::literals;

namespace {

std::vector<RankedSet> targets() {
  return {sets::sigma_star(), sets::ends_in_one(), sets::zeros(), sets::even_length(),
          sets::beacons()};
}

BStr drop_last_or_eps(const BStr& x) { return x.empty() ? x : x.drop_last(1); }

}  // namespace

TEST(Retarget, Examples) {
  auto id = identity_compression();
  EXPECT_EQ(*retarget_rec(id, sets::ends_in_one())(BStr{}), "1"_b);
  EXPECT_EQ(*retarget_rec(id, sets::zeros())(unrank(3)), "00"_b);
  EXPECT_EQ(*untarget_rec(id, sets::ends_in_one())("10"_b), BStr{});
}

TEST(Retarget, RecursiveRoundTrip) {
  auto id = identity_compression();
  for (const auto& b : targets()) {
    auto there = retarget_rec(id, b, 30);
    auto back = untarget_rec(there, b, 30);
    for_each_upto(8, [&](const BStr& x) {
      ASSERT_TRUE(b.member(*there(x))) << b.name << " " << x.str();
      ASSERT_EQ(*back(x), x) << b.name << " " << x.str();
    });
  }
}

TEST(Retarget, RetargetedMapIsCompression) {
  auto b = sets::even_length();
  RankedSet all{"all", sigma_star_member(), std::nullopt,
                retarget_rec(identity_compression(), b), std::nullopt};
  EXPECT_TRUE(verify_compression(all, b.member, 8).clean());
}

TEST(Retarget, EnumeratedAgreesWithDecided) {
  auto id = identity_compression();
  for (const auto& b : targets()) {
    auto e = shortlex_enumerator(b, 30);
    auto via_e = retarget_re(id, e, 1u << 20);
    auto via_d = retarget_rec(id, b, 30);
    auto back = untarget_re(via_e, e, 1u << 20);
    for_each_upto(6, [&](const BStr& x) {
      ASSERT_EQ(*via_e(x), *via_d(x)) << b.name;
      ASSERT_EQ(*back(x), x) << b.name;
    });
  }
}

TEST(Retarget, RepeatingEnumeratorCountsDistinctOutputs) {
  auto b = sets::ends_in_one();
  auto there = retarget_rec(identity_compression(), b);
  auto back = untarget_re(there, stuttering_enumerator(b), 1u << 16);
  for_each_upto(5, [&](const BStr& x) { ASSERT_EQ(*back(x), x); });
}

TEST(Retarget, StepCapMakesMapUndefined) {
  auto e = shortlex_enumerator(sets::ends_in_one());
  auto f = retarget_re(identity_compression(), e, 3);
  EXPECT_TRUE(f("1"_b));
  EXPECT_FALSE(f("00"_b));
}

TEST(Honest, Normalize) {
  auto hm = honest_normalize([](const BStr&) { return BStr{}; }, Polynomial{2, 1});
  EXPECT_EQ(hm.map("111"_b), "111"_b);
  EXPECT_EQ(hm.map("11"_b), BStr{});
  EXPECT_EQ(hm.bound(0), 2u);
  EXPECT_EQ(hm.bound(5), 7u);
  auto zero = honest_normalize([](const BStr& x) { return x; }, Polynomial{0});
  EXPECT_EQ(zero.bound(4), 4u);
}

TEST(Honest, NormalizedMapIsHonest) {
  auto f = [](const BStr& x) { return BStr::zeros(x.size() / 3); };
  Polynomial g{1, 2};
  auto hm = honest_normalize(f, g);
  for_each_upto(10, [&](const BStr& x) { ASSERT_LE(x.size(), hm.bound(hm.map(x).size())); });
}

TEST(Collisions, ParityPairs) {
  auto pairs = collision_pairs([](const BStr& x) { return BStr(x.size() % 2 ? "1" : "0"); }, 3);
  ASSERT_FALSE(pairs.empty());
  EXPECT_EQ(pairs[0], std::make_pair("0"_b, "1"_b));
  std::set<BStr> seen;
  for (const auto& [x, y] : pairs) {
    EXPECT_TRUE(seen.insert(x).second);
    EXPECT_TRUE(seen.insert(y).second);
    EXPECT_EQ(x.size() % 2, y.size() % 2);
  }
}

TEST(Selector, ComplementSubset) {
  auto sel = membership_selector(sets::ends_in_one().member);
  std::vector<std::pair<BStr, BStr>> pairs{{"0"_b, "1"_b}, {"11"_b, "10"_b}};
  EXPECT_EQ(selector_complement_subset(pairs, sel), (std::vector<BStr>{"0"_b, "10"_b}));
  Selector rogue{"rogue", [](const BStr&, const BStr&) { return "000"_b; }};
  EXPECT_THROW(selector_complement_subset(pairs, rogue), contract_violation);
}

TEST(Selector, DecidesMembership) {
  auto b = sets::ends_in_one();
  auto sel = membership_selector(b.member);
  for_each_upto(8, [&](const BStr& x) {
    ASSERT_EQ(decide_via_selector(drop_last_or_eps, Polynomial{1, 1}, sel, x), b.member(x))
        << x.str();
  });
}

TEST(Coenumerator, Decides) {
  auto id = [](const BStr& x) { return x; };
  EXPECT_EQ(decide_via_coenumerator(id, Polynomial{0, 1}, catalog::divergent(), "01"_b, 10), true);
  // Two candidates and an acceptor that never halts: budget runs out.
  EXPECT_FALSE(decide_via_coenumerator(drop_last_or_eps, Polynomial{1, 1}, catalog::divergent(),
                                       "01"_b, 4));
}

TEST(Coenumerator, AcceptorSeparatesCandidates) {
  // Halts exactly on the complement of Σ*1 (minus eps).
  PartialFn accept_ends_in_zero{"ends_in_0", [](const BStr& x, std::uint64_t) -> std::optional<BStr> {
                                  if (!x.empty() && x.back() == '0') return x;
                                  return std::nullopt;
                                }};
  for_each_upto(6, [&](const BStr& x) {
    if (x.size() < 2) return;
    auto v = decide_via_coenumerator(drop_last_or_eps, Polynomial{1, 1}, accept_ends_in_zero, x, 8);
    ASSERT_TRUE(v) << x.str();
    ASSERT_EQ(*v, x.back() == '1') << x.str();
  });
}

TEST(Coenumerator, PreimageSearchIsBounded) {
  auto id = [](const BStr& x) { return x; };
  EXPECT_THROW(decide_via_coenumerator(id, Polynomial{30}, catalog::divergent(), "0"_b, 1),
               resource_error);
}
