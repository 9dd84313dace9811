#include <random>

#include <gtest/gtest.h>

#include "rankkit/priority.hpp"

using namespace rankkit;
using namespace rankkit::literals;

namespace {

std::set<Triple> column(std::uint64_t k, std::uint64_t top) {
  std::set<Triple> s;
  for (std::uint64_t j = 0; j <= top; ++j) {
    s.insert({0, j, k});
    s.insert({3, j, k});
  }
  return s;
}

}  // namespace

TEST(Triples, EncodingRoundTrip) {
  for (std::uint64_t i = 0; i < 5000; ++i) {
    BStr x = from_index(i);
    ASSERT_EQ(triple_to_bstr(bstr_to_triple(x)), x);
  }
  EXPECT_EQ(triple_to_bstr({0, 0, 0}), BStr{});
  EXPECT_EQ(cantor_pair(0, 1), 2);
  EXPECT_THROW(triple_to_bstr({4, 0, 0}), domain_error);
}

TEST(Triples, MapExamples) {
  EXPECT_EQ(f_map({3, 2, 7}), (Triple{3, 3, 7}));
  EXPECT_EQ(f_map({1, 4, 7}), (Triple{1, 3, 7}));
  EXPECT_EQ(f_map({1, 0, 7}), (Triple{0, 0, 7}));
  EXPECT_EQ(f_map({0, 0, 7}), (Triple{3, 0, 7}));
  EXPECT_EQ(f_map({2, 0, 7}), (Triple{3, 0, 7}));
}

TEST(Triples, PreimagesInvertMap) {
  for (unsigned t = 0; t < 4; ++t)
    for (std::uint64_t j = 0; j < 8; ++j)
      for (std::uint64_t k = 0; k < 4; ++k) {
        Triple x{t, j, k};
        for (const auto& y : f_preimages(x)) ASSERT_EQ(f_map(y), x);
        auto pre = f_preimages(f_map(x));
        ASSERT_EQ(std::count(pre.begin(), pre.end(), x), 1) << x.str();
      }
}

TEST(Triples, ColoringFlipsAlongEdges) {
  EXPECT_EQ(color({0, 0, 5}), 0);
  for (unsigned t = 0; t < 4; ++t)
    for (std::uint64_t j = 0; j < 10; ++j) {
      Triple x{t, j, 3};
      ASSERT_NE(color(x), color(f_map(x))) << x.str();
    }
}

TEST(Printing, WouldPrintExamples) {
  std::vector<QEntry> q{{1, 4, 1, 1}, {2, 6, 2, 2}};
  EXPECT_TRUE(would_print(q, {3, 9, 4}));
  EXPECT_TRUE(would_print(q, {1, 3, 4}));
  EXPECT_TRUE(would_print(q, {0, 0, 4}));
  EXPECT_FALSE(would_print(q, {0, 1, 4}));
  EXPECT_FALSE(would_print(q, {2, 0, 4}));
  EXPECT_TRUE(would_print(q, {2, 5, 6}));
  EXPECT_FALSE(would_print(q, {0, 0, 6}));
  EXPECT_FALSE(would_print(q, {3, 0, 5}));
  EXPECT_FALSE(would_print({}, {3, 0, 0}));
}

TEST(Printing, WouldPrintAgreesWithFiftyMoreStages) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<QEntry> q;
    std::set<std::uint64_t> used;
    for (int e = 0; e < 3; ++e) {
      std::uint64_t k = rng() % 6;
      if (used.insert(k).second) q.push_back({static_cast<unsigned>(rng() % 3), k, 0, 0});
    }
    auto closure = print_closure(q, 50);
    for (unsigned t = 0; t < 4; ++t)
      for (std::uint64_t j = 0; j <= 20; ++j)
        for (std::uint64_t k = 0; k < 6; ++k) {
          Triple w{t, j, k};
          ASSERT_EQ(would_print(q, w), closure.count(w) == 1) << w.str();
        }
  }
}

TEST(PathSet, FullColumnIsClean) {
  auto rep = path_set_check(column(2, 5), 5, 1);
  EXPECT_TRUE(rep.clean()) << rep.to_table();
  EXPECT_GT(rep.checked, 0u);
}

TEST(PathSet, MissingInteriorNodeFailsTwice) {
  auto s = column(2, 5);
  s.erase({0, 2, 2});
  EXPECT_EQ(path_set_check(s, 5, 1).failures.size(), 2u);
}

TEST(PathSet, DoublePredecessorFails) {
  auto s = column(2, 5);
  s.insert({2, 0, 2});
  EXPECT_FALSE(path_set_check(s, 5, 1).clean());
}

TEST(PathSet, ColorsPartitionPrintedSet) {
  auto st = priority_run(catalog::shipped(), 120);
  auto [zero, one] = split_by_color(st.printed);
  EXPECT_EQ(zero.size() + one.size(), st.printed.size());
  for (const auto& x : zero) EXPECT_FALSE(one.count(x));
  for (const auto& x : zero) {
    if (x.j + 2 > st.stages) continue;
    EXPECT_TRUE(one.count(f_map(x))) << x.str();
  }
}

TEST(Simulator, DivergentFunctionsOnlyAddPairs) {
  auto st = priority_run({catalog::divergent()}, 5);
  EXPECT_EQ(st.r.size(), 5u);
  EXPECT_TRUE(st.printed.empty());
  EXPECT_TRUE(st.q.empty());
}

TEST(Simulator, ConstantFiresAtFirstStage) {
  auto st = priority_run({catalog::constant(triple_to_bstr({0, 0, 0}))}, 1);
  ASSERT_TRUE(st.log.at(0).fire);
  EXPECT_EQ(st.log[0].fire->case_taken, 1);
}

TEST(Simulator, ShippedRunValidates) {
  VerifyReport rep;
  auto st = priority_run(catalog::shipped(), 200, &rep);
  EXPECT_TRUE(rep.clean()) << rep.to_table();
  auto path = path_set_check(st, 2);
  EXPECT_TRUE(path.clean()) << path.to_table();
  EXPECT_EQ(st.stages, 200u);
  std::uint64_t last_b = 0;
  for (const auto& ev : st.log) {
    EXPECT_GE(ev.b_after, last_b);
    last_b = ev.b_after;
  }
}

TEST(Simulator, Deterministic) {
  EXPECT_EQ(priority_run(catalog::shipped(), 80), priority_run(catalog::shipped(), 80));
}

TEST(Simulator, ZeroStagesRejected) {
  EXPECT_THROW(priority_run(catalog::shipped(), 0), configuration_error);
}

TEST(Requirements, ReportAndMisattribution) {
  auto st = priority_run(catalog::shipped(), 200);
  auto lines = requirement_report(st);
  ASSERT_FALSE(lines.empty());
  for (std::size_t a = 1; a < lines.size(); ++a) EXPECT_LT(lines[a - 1].n, lines[a].n);
  auto tampered = st;
  tampered.log.back().injuries.push_back({1, 3, tampered.stages, {0, 0, 0}});
  EXPECT_THROW(requirement_report(tampered), contract_violation);
}

TEST(Requirements, ValidateStageCatchesShrinkingCounter) {
  auto before = priority_run(catalog::shipped(), 10);
  auto after = before;
  after.b = before.b > 0 ? before.b - 1 : 0;
  before.b = after.b + 1;
  EXPECT_FALSE(validate_stage(before, after, after.log.back()).clean());
}

TEST(Iso, Compressions) {
  auto id = [](const BStr& x) { return x; };
  auto [f, g] = iso_to_compressions(id, id);
  EXPECT_EQ(*f("0110"_b), "0110"_b);
  EXPECT_THROW(iso_to_compressions([](const BStr& x) { return shift(x, 1); },
                                   [](const BStr& x) { return shift(x, -1); }),
               contract_violation);
  auto swap = [](const BStr& x) {
    if (x.empty()) return x;
    return x.drop_last(1) + (x.back() == '0' ? '1' : '0');
  };
  auto [h, hinv] = iso_to_compressions(swap, swap);
  RankedSet all{"all", sigma_star_member(), std::nullopt, h, std::nullopt};
  EXPECT_TRUE(verify_compression(all, sigma_star_member(), 8).clean());
  EXPECT_EQ(*hinv("10"_b), "11"_b);
}
