#pragma once

// JSON forms of reports, traces and simulator states. Keys are written in
// a fixed order so that equal values serialize to equal text.

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankkit/diagonal.hpp"
#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/priority.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

inline void to_json(Json& j, const BStr& x) { j = x.str(); }
inline void from_json(const Json& j, BStr& x) { x = BStr::parse(j.get<std::string>()); }

inline Json rank_json(const Rank& r) { return r.str(); }
inline Rank rank_from_json(const Json& j) { return Rank(j.get<std::string>()); }

// ------------------------------------------------------------ reports

inline void to_json(Json& j, const VerifyFailure& f) {
  j = Json{{"input", f.input}, {"expected", f.expected}, {"actual", f.actual},
           {"contract", f.contract}};
}
inline void from_json(const Json& j, VerifyFailure& f) {
  f.input = j.at("input").get<BStr>();
  f.expected = j.at("expected").get<std::string>();
  f.actual = j.at("actual").get<std::string>();
  f.contract = j.at("contract").get<std::string>();
}

inline void to_json(Json& j, const VerifyReport& r) {
  j = Json{{"subject", r.subject}, {"checked", r.checked}, {"clean", r.clean()},
           {"failures", r.failures}, {"notes", r.notes}};
}
inline void from_json(const Json& j, VerifyReport& r) {
  r.subject = j.at("subject").get<std::string>();
  r.checked = j.at("checked").get<std::uint64_t>();
  r.failures = j.at("failures").get<std::vector<VerifyFailure>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
}

// ----------------------------------------------------------- diagonal

inline void to_json(Json& j, const DiagWitness& w) {
  j = Json{{"kind", to_string(w.kind)}, {"first", w.first}, {"second", w.second}};
}
inline void from_json(const Json& j, DiagWitness& w) {
  w.kind = parse_witness_kind(j.at("kind").get<std::string>());
  w.first = j.at("first").get<BStr>();
  w.second = j.at("second").get<BStr>();
}

inline void to_json(Json& j, const DiagStage& s) {
  j = Json{{"i", s.i},
           {"phi", s.phi},
           {"case", s.case_taken},
           {"m_before", s.m_before},
           {"m_after", s.m_after},
           {"added_a", s.added_a},
           {"added_b", s.added_b},
           {"witness", s.witness}};
}
inline void from_json(const Json& j, DiagStage& s) {
  s.i = j.at("i").get<std::size_t>();
  s.phi = j.at("phi").get<std::string>();
  s.case_taken = j.at("case").get<int>();
  s.m_before = j.at("m_before").get<BStr>();
  s.m_after = j.at("m_after").get<BStr>();
  s.added_a = j.at("added_a").get<std::vector<BStr>>();
  s.added_b = j.at("added_b").get<std::vector<BStr>>();
  s.witness = j.at("witness").get<DiagWitness>();
}

inline void to_json(Json& j, const DiagTrace& t) {
  j = Json{{"mode", to_string(t.mode)},
           {"budget", t.budget},
           {"horizon", t.horizon},
           {"m_final", t.m_final},
           {"a_prefix", std::vector<BStr>(t.a_prefix.begin(), t.a_prefix.end())},
           {"b_prefix", std::vector<BStr>(t.b_prefix.begin(), t.b_prefix.end())},
           {"stages", t.stages}};
}
inline void from_json(const Json& j, DiagTrace& t) {
  t.mode = parse_diag_mode(j.at("mode").get<std::string>());
  t.budget = j.at("budget").get<std::uint64_t>();
  t.horizon = j.at("horizon").get<std::size_t>();
  t.m_final = j.at("m_final").get<BStr>();
  auto a = j.at("a_prefix").get<std::vector<BStr>>();
  auto b = j.at("b_prefix").get<std::vector<BStr>>();
  t.a_prefix = {a.begin(), a.end()};
  t.b_prefix = {b.begin(), b.end()};
  t.stages = j.at("stages").get<std::vector<DiagStage>>();
}

// ----------------------------------------------------------- priority

inline void to_json(Json& j, const Triple& x) { j = Json::array({x.t, x.j, x.k}); }
inline void from_json(const Json& j, Triple& x) {
  x.t = j.at(0).get<unsigned>();
  x.j = j.at(1).get<std::uint64_t>();
  x.k = j.at(2).get<std::uint64_t>();
  if (x.t > 3) throw domain_error("triple type must be below 4");
}

inline void to_json(Json& j, const QEntry& e) {
  j = Json{{"t", e.t}, {"k", e.k}, {"stage", e.stage}, {"b", e.b}};
}
inline void from_json(const Json& j, QEntry& e) {
  e.t = j.at("t").get<unsigned>();
  e.k = j.at("k").get<std::uint64_t>();
  e.stage = j.at("stage").get<std::size_t>();
  e.b = j.at("b").get<std::uint64_t>();
}

inline void to_json(Json& j, const RPair& p) { j = Json::array({p.n, p.k}); }
inline void from_json(const Json& j, RPair& p) {
  p.n = j.at(0).get<std::size_t>();
  p.k = j.at(1).get<std::uint64_t>();
}

inline void to_json(Json& j, const CaseFire& f) {
  j = Json{{"n", f.n}, {"k", f.k}, {"output", f.output}, {"w", f.w}, {"case", f.case_taken},
           {"queued", f.queued ? Json(*f.queued) : Json(nullptr)}};
}
inline void from_json(const Json& j, CaseFire& f) {
  f.n = j.at("n").get<std::size_t>();
  f.k = j.at("k").get<std::uint64_t>();
  f.output = j.at("output").get<BStr>();
  f.w = j.at("w").get<Triple>();
  f.case_taken = j.at("case").get<int>();
  if (j.at("queued").is_null()) f.queued.reset();
  else f.queued = j.at("queued").get<QEntry>();
}

inline void to_json(Json& j, const Injury& x) {
  j = Json{{"n", x.n}, {"by", x.by}, {"stage", x.stage}, {"witness", x.witness}};
}
inline void from_json(const Json& j, Injury& x) {
  x.n = j.at("n").get<std::size_t>();
  x.by = j.at("by").get<std::size_t>();
  x.stage = j.at("stage").get<std::size_t>();
  x.witness = j.at("witness").get<Triple>();
}

inline void to_json(Json& j, const StageEvent& e) {
  j = Json{{"i", e.i},
           {"r_added", e.r_added},
           {"r_removed", e.r_removed},
           {"fire", e.fire ? Json(*e.fire) : Json(nullptr)},
           {"injuries", e.injuries},
           {"b_after", e.b_after}};
}
inline void from_json(const Json& j, StageEvent& e) {
  e.i = j.at("i").get<std::size_t>();
  e.r_added = j.at("r_added").get<std::vector<RPair>>();
  e.r_removed = j.at("r_removed").get<std::vector<RPair>>();
  if (j.at("fire").is_null()) e.fire.reset();
  else e.fire = j.at("fire").get<CaseFire>();
  e.injuries = j.at("injuries").get<std::vector<Injury>>();
  e.b_after = j.at("b_after").get<std::uint64_t>();
}

inline void to_json(Json& j, const PriorityState& s) {
  j = Json{{"phis", s.phi_names},
           {"stages", s.stages},
           {"b", s.b},
           {"q", s.q},
           {"r", std::vector<RPair>(s.r.begin(), s.r.end())},
           {"printed", std::vector<Triple>(s.printed.begin(), s.printed.end())},
           {"log", s.log}};
}
inline void from_json(const Json& j, PriorityState& s) {
  s.phi_names = j.at("phis").get<std::vector<std::string>>();
  s.stages = j.at("stages").get<std::size_t>();
  s.b = j.at("b").get<std::uint64_t>();
  s.q = j.at("q").get<std::vector<QEntry>>();
  auto r = j.at("r").get<std::vector<RPair>>();
  s.r = {r.begin(), r.end()};
  auto p = j.at("printed").get<std::vector<Triple>>();
  s.printed = {p.begin(), p.end()};
  s.log = j.at("log").get<std::vector<StageEvent>>();
}

// ---------------------------------------------------------- run record

struct RunRecord {
  std::string command;
  std::string version = kVersion;
  Json flags = Json::object();
  Json inputs = Json::object();
  Json result;
  std::optional<Json> trace;
  std::map<std::string, double> durations_ms;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline void to_json(Json& j, const RunRecord& r) {
  j = Json{{"command", r.command}, {"version", r.version}, {"flags", r.flags},
           {"inputs", r.inputs},   {"result", r.result}};
  if (r.trace) j["trace"] = *r.trace;
  Json d = Json::object();
  for (const auto& [k, v] : r.durations_ms) d[k] = v;
  j["durations_ms"] = d;
}
inline void from_json(const Json& j, RunRecord& r) {
  r.command = j.at("command").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.flags = j.at("flags");
  r.inputs = j.at("inputs");
  r.result = j.at("result");
  if (j.contains("trace")) r.trace = j.at("trace");
  else r.trace.reset();
  r.durations_ms.clear();
  for (const auto& [k, v] : j.at("durations_ms").items()) r.durations_ms[k] = v.get<double>();
}

// Times a callable, recording the elapsed milliseconds under `key`.
template <class F>
auto timed(RunRecord& rec, const std::string& key, F&& f) {
  auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    rec.durations_ms[key] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
  };
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    finish();
  } else {
    auto out = f();
    finish();
    return out;
  }
}

// Re-runs the simulation a saved state claims to come from and checks it
// stage by stage, then checks the path-set and injury conditions.
inline VerifyReport priority_check(const PriorityState& claimed, std::size_t margin = 2) {
  VerifyReport rep;
  rep.subject = "priority state";
  std::vector<PartialFn> phis;
  for (const auto& n : claimed.phi_names) phis.push_back(catalog::by_name(n));
  if (claimed.stages == 0) {
    rep.fail(BStr{}, "at least one stage", "0", "replay");
    return rep;
  }
  VerifyReport stages;
  PriorityState replay = priority_run(phis, claimed.stages, &stages);
  rep.merge(stages);
  ++rep.checked;
  if (!(replay == claimed)) {
    std::size_t i = 0;
    while (i < replay.log.size() && i < claimed.log.size() && replay.log[i] == claimed.log[i])
      ++i;
    rep.fail(from_index(i + 1), "state equal to replay",
             "first differing stage " + std::to_string(i + 1), "replay");
  }
  rep.merge(path_set_check(claimed, margin));
  try {
    requirement_report(claimed);
  } catch (const contract_violation& e) {
    rep.fail(BStr{}, "injuries attributed to higher priority", e.what(), "injury");
  }
  rep.subject = "priority state";
  return rep;
}

}  // namespace rankkit
