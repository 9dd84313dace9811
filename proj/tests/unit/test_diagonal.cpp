#include <gtest/gtest.h>

#include "rankkit/diagonal.hpp"

using namespace rankkit;
using namespace rankkit::literals;

namespace {

const DiagMode kModes[] = {DiagMode::intersection, DiagMode::union_, DiagMode::complement};

}  // namespace

TEST(Diagonal, EveryModeVerifiesOnShippedFunctions) {
  auto phis = catalog::shipped();
  for (auto mode : kModes) {
    auto t = diag_run(mode, phis, 256, 9);
    EXPECT_EQ(t.stages.size(), phis.size()) << to_string(mode);
    auto rep = diag_verify(t, phis);
    EXPECT_TRUE(rep.clean()) << rep.to_table();
    EXPECT_TRUE(diag_verify(t).clean()) << to_string(mode);
  }
}

TEST(Diagonal, Deterministic) {
  auto phis = catalog::shipped();
  for (auto mode : kModes) EXPECT_EQ(diag_run(mode, phis, 256, 9), diag_run(mode, phis, 256, 9));
}

TEST(Diagonal, NoFunctionsLeavesEmptyPrefixes) {
  auto t = diag_run(DiagMode::union_, {}, 64, 6);
  EXPECT_TRUE(t.stages.empty());
  EXPECT_TRUE(t.a_prefix.empty());
  EXPECT_TRUE(t.b_prefix.empty());
  EXPECT_TRUE(diag_verify(t, {}).clean());
}

TEST(Diagonal, IdentityAgainstIntersectionTakesFirstCase) {
  auto t = diag_run(DiagMode::intersection, {catalog::identity()}, 256, 9);
  ASSERT_EQ(t.stages.size(), 1u);
  EXPECT_EQ(t.stages[0].case_taken, 1);
}

TEST(Diagonal, DivergentFunctionYieldsUndefinedWitness) {
  auto t = diag_run(DiagMode::complement, {catalog::divergent()}, 32, 6);
  ASSERT_EQ(t.stages.size(), 1u);
  EXPECT_EQ(t.stages[0].witness.kind, WitnessKind::undefined);
  EXPECT_TRUE(diag_verify(t, {catalog::divergent()}).clean());
}

TEST(Diagonal, CorruptedTraceIsCaught) {
  auto phis = catalog::shipped();
  auto t = diag_run(DiagMode::union_, phis, 256, 9);

  auto wrong_witness = t;
  wrong_witness.stages[0].witness.first = shift(wrong_witness.stages[0].witness.first, 1);
  EXPECT_FALSE(diag_verify(wrong_witness, phis).clean());

  auto extra = t;
  extra.a_prefix.insert(t.m_final + "0"_b);
  EXPECT_FALSE(diag_verify(extra, phis).clean());

  auto bad_case = t;
  bad_case.stages.back().case_taken = 9;
  EXPECT_FALSE(diag_verify(bad_case, phis).clean());
}

TEST(Diagonal, BadConfiguration) {
  EXPECT_THROW(diag_run(DiagMode::union_, {}, 0, 5), configuration_error);
  EXPECT_THROW(parse_diag_mode("xor"), configuration_error);
  EXPECT_EQ(parse_diag_mode("union"), DiagMode::union_);
}

TEST(Diagonal, ConstantAgainstUnionCollides) {
  auto t = diag_run(DiagMode::union_, {catalog::constant_eps()}, 256, 9);
  ASSERT_EQ(t.stages.size(), 1u);
  // m0 = 0 and the search above it finds 1 with the same value.
  EXPECT_EQ(t.stages[0].case_taken, 3);
  EXPECT_EQ(t.stages[0].witness, (DiagWitness{WitnessKind::collision, "0"_b, "1"_b}));
}
