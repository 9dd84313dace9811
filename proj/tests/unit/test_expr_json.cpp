#include <gtest/gtest.h>

#include "rankkit/expr.hpp"
#include "rankkit/serialize.hpp"

using namespace rankkit;
using namespace rankkit::literals;

TEST(Expr, ParsesAndPrintsCanonically) {
  auto e = parse_expr(" union( ends_in_1 , finite{ eps,01 } ) ");
  EXPECT_EQ(e.kind, SetExpr::Kind::union_);
  EXPECT_EQ(e.str(), "union(ends_in_1,finite{eps,01})");
  for (std::string text : {"beacons", "complement(zeros)", "join(join(zeros,beacons),empty)",
                           "intersect(finite{0,1},complement(ends_in_1))"})
    EXPECT_EQ(parse_expr(parse_expr(text).str()), parse_expr(text)) << text;
}

TEST(Expr, ErrorsCarryPositions) {
  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      parse_expr(text);
    } catch (const parse_error& e) {
      return e.position();
    }
    return std::string::npos;
  };
  EXPECT_EQ(position_of("union(beacons"), 13u);
  EXPECT_EQ(position_of("nosuch"), 0u);
  EXPECT_EQ(position_of("xor(zeros,zeros)"), 0u);
  EXPECT_EQ(position_of("complement(zeros,zeros)"), 0u);
  EXPECT_EQ(position_of("finite{012}"), 7u);
  EXPECT_EQ(position_of("zeros)"), 5u);
}

TEST(Expr, EvaluatedRankersAreCorrect) {
  for (std::string text : {"complement(beacons)", "join(ends_in_1,even_length)",
                           "union(ends_in_1,finite{eps,00})", "intersect(finite{0,1,11},ends_in_1)"}) {
    auto e = evaluate(text);
    ASSERT_TRUE(e.set.ranker) << text;
    auto rep = verify_strong(e.set, 9);
    EXPECT_TRUE(rep.clean()) << text << "\n" << rep.to_table();
  }
  EXPECT_EQ(*rank_value(*evaluate("union(ends_in_1,finite{eps})").set.ranker, "11"_b), 4);
  EXPECT_FALSE(evaluate("union(ends_in_1,even_length)").set.ranker);
}

TEST(Expr, JoinOfCompressibleSetsHasCompressor) {
  auto e = evaluate("join(sigma_star,sigma_star)");
  ASSERT_TRUE(e.set.compressor);
  EXPECT_TRUE(verify_compression(e.set, sigma_star_member(), 7).clean());
}

TEST(Json, DiagTraceRoundTrip) {
  auto t = diag_run(DiagMode::complement, catalog::shipped(), 128, 8);
  Json j = t;
  EXPECT_EQ(j.get<DiagTrace>(), t);
  EXPECT_EQ(Json::parse(j.dump()).get<DiagTrace>(), t);
  EXPECT_EQ(j.begin().key(), "mode");
}

TEST(Json, PriorityStateRoundTrip) {
  auto st = priority_run(catalog::shipped(), 60);
  Json j = st;
  EXPECT_EQ(Json::parse(j.dump()).get<PriorityState>(), st);
  EXPECT_TRUE(priority_check(st).clean());
}

TEST(Json, PriorityCheckFindsTampering) {
  auto st = priority_run(catalog::shipped(), 60);
  auto tampered = st;
  tampered.b += 1;
  EXPECT_FALSE(priority_check(tampered).clean());
  auto dropped = st;
  dropped.printed.erase(dropped.printed.begin());
  EXPECT_FALSE(priority_check(dropped).clean());
}

TEST(Json, VerifyReportRoundTrip) {
  VerifyReport r;
  r.subject = "s";
  r.checked = 4;
  r.fail("01"_b, "3", "4", "rank");
  r.notes.push_back("n");
  Json j = r;
  EXPECT_FALSE(j.at("clean").get<bool>());
  auto back = j.get<VerifyReport>();
  EXPECT_EQ(back.subject, r.subject);
  EXPECT_EQ(back.checked, r.checked);
  EXPECT_EQ(back.failures.size(), 1u);
  EXPECT_EQ(back.failures[0].input, "01"_b);
  EXPECT_EQ(Json(back).dump(), j.dump());
}

TEST(Json, RunRecordRoundTrip) {
  RunRecord rec;
  rec.command = "rank";
  rec.flags = Json{{"strong", true}};
  rec.inputs = Json{{"expr", "beacons"}, {"string", "0000"}};
  rec.result = Json{{"rank", "3"}};
  rec.durations_ms["rank"] = 0.5;
  Json j = rec;
  EXPECT_EQ(j.get<RunRecord>(), rec);
  EXPECT_FALSE(j.contains("trace"));
  rec.trace = Json::array({1, 2});
  EXPECT_EQ(Json(rec).get<RunRecord>(), rec);
  EXPECT_EQ(Json(rec).at("version"), kVersion);
}

TEST(Json, BadInputs) {
  EXPECT_THROW(Json::parse(R"([5,0,0])").get<Triple>(), domain_error);
  EXPECT_THROW(Json::parse(R"("012")").get<BStr>(), std::exception);
  EXPECT_THROW(Json::parse(R"({"mode":"sideways"})").get<DiagTrace>(), configuration_error);
}
