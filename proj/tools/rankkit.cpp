// rankkit: command-line front end.
//
// Exit codes: 0 clean, 1 contract failure, 2 usage error, 3 resource or
// budget exhaustion. Errors go to stderr as one JSON object per line.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rankkit/rankkit.hpp"

namespace {

using namespace rankkit;

constexpr int kClean = 0;
constexpr int kContract = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

std::optional<std::size_t> env_max_len() {
  const char* v = std::getenv("RANKKIT_MAXLEN");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t pos = 0;
    unsigned long n = std::stoul(v, &pos);
    if (pos != std::string(v).size() || n > 24) throw std::invalid_argument(v);
    return n;
  } catch (const std::logic_error&) {
    throw configuration_error("RANKKIT_MAXLEN must be an integer between 0 and 24");
  }
}

// Explicit flag, else RANKKIT_MAXLEN, else the default capped by the set's own bound.
std::size_t resolve_max_len(std::optional<std::size_t> flag, std::size_t fallback,
                            std::size_t set_bound) {
  if (flag) return *flag;
  if (auto e = env_max_len()) return *e;
  return std::min(fallback, set_bound);
}

void print_error(const char* kind, const std::string& message,
                 std::optional<std::size_t> position = std::nullopt) {
  Json j{{"error", kind}, {"message", message}};
  if (position) j["position"] = *position;
  std::cerr << j.dump() << "\n";
}

struct Output {
  bool json = false;

  void emit(RunRecord& rec, const std::string& plain) const {
    if (json) std::cout << Json(rec).dump(2) << "\n";
    else std::cout << plain;
  }
};

std::string rank_text(const std::optional<Rank>& r) { return r ? r->str() : "out"; }

int cmd_rank(const Output& out, const std::string& expr, const std::string& x, bool strong,
             bool brute) {
  RunRecord rec;
  rec.command = "rank";
  rec.flags = {{"strong", strong}, {"brute", brute}};
  rec.inputs = {{"expr", expr}, {"string", x}};
  EvaluatedSet s = evaluate(expr);
  BStr z = BStr::parse(x);
  std::optional<Rank> r;
  std::string via;
  if (brute || (!strong && !s.set.ranker)) {
    if (z.size() > 24) throw resource_error("brute-force ranks are limited to length 24");
    r = timed(rec, "rank", [&] { return brute_rank(s.set.member, z); });
    via = "brute";
  } else {
    if (!s.set.ranker) throw configuration_error("set '" + s.set.name + "' has no ranker");
    if (strong && kind_of(*s.set.ranker) != RankerKind::strong)
      throw configuration_error("set '" + s.set.name + "' has a " +
                                to_string(kind_of(*s.set.ranker)) + " ranker, strong required");
    r = timed(rec, "rank", [&] { return rank_value(*s.set.ranker, z); });
    via = to_string(kind_of(*s.set.ranker));
  }
  rec.result = {{"rank", r ? Json(r->str()) : Json("out")}, {"via", via}};
  out.emit(rec, rank_text(r) + "\n");
  return kClean;
}

int cmd_shift(const Output& out, const std::string& x, long long n) {
  RunRecord rec;
  rec.command = "shift";
  rec.inputs = {{"string", x}, {"n", n}};
  BStr y = shift(BStr::parse(x), n);
  rec.result = {{"string", y}};
  out.emit(rec, y.str() + "\n");
  return kClean;
}

int cmd_verify(const Output& out, const std::string& expr, const std::string& kind,
               std::optional<std::size_t> max_len_flag) {
  RunRecord rec;
  rec.command = "verify";
  EvaluatedSet s = evaluate(expr);
  const bool compression = kind == "compression";
  std::size_t max_len = resolve_max_len(max_len_flag, compression ? 8 : 10, s.max_len);
  rec.flags = {{"kind", kind}, {"max_len", max_len}};
  rec.inputs = {{"expr", expr}};
  VerifyReport rep = timed(rec, "verify", [&] {
    if (compression) {
      if (!s.set.compressor) {
        if (!s.set.ranker) throw configuration_error("set '" + s.set.name + "' has no ranker");
        s.set.compressor = rank_to_compression(*s.set.ranker, s.set.member);
      }
      return verify_compression(s.set, sigma_star_member(), max_len);
    }
    RankerKind k = parse_ranker_kind(kind);
    if (k == RankerKind::semistrong && s.set.ranker &&
        kind_of(*s.set.ranker) == RankerKind::strong)
      s.set.ranker =
          Ranker{as_semistrong(std::get<StrongRanker>(*s.set.ranker), s.set.member)};
    if (k == RankerKind::strong) return verify_strong(s.set, max_len);
    if (k == RankerKind::semistrong) return verify_semistrong(s.set, max_len);
    return verify_weak(s.set, max_len);
  });
  rec.result = rep;
  out.emit(rec, rep.to_table());
  return rep.clean() ? kClean : kContract;
}

int cmd_satcount(const Output& out, const std::string& via, const std::string& formula,
                 std::optional<unsigned> vars) {
  RunRecord rec;
  rec.command = "satcount";
  rec.flags = {{"via", via}};
  rec.inputs = {{"formula", formula}};
  BStr alpha;
  if (formula == "eps" || formula.find_first_not_of("01") == std::string::npos) {
    alpha = BStr::parse(formula);
  } else {
    alpha = encode_formula(parse_formula(formula, vars));
  }
  auto f = decode_formula(alpha);
  if (!f) throw domain_error("not a valid formula encoding: " + alpha.str());
  rec.inputs["encoding"] = alpha;
  rec.inputs["k"] = f->k;
  Rank n = timed(rec, "count", [&]() -> Rank {
    if (via == "direct") return count_sat(*f);
    if (via == "A") return extract_sat_count_A(beacon_sets().A.ranker.value(), alpha);
    if (via == "B") return extract_sat_count_B(beacon_sets().B.ranker.value(), alpha);
    return paired_extract(Ranker{paired_sat_sets().rIntersect}, alpha);
  });
  rec.result = {{"count", n.str()}};
  out.emit(rec, n.str() + "\n");
  return kClean;
}

int cmd_diag(const std::string& mode, const std::string& phis, std::uint64_t budget,
             std::size_t horizon) {
  RunRecord rec;
  rec.command = "diag";
  rec.flags = {{"mode", mode}, {"budget", budget}, {"horizon", horizon}};
  rec.inputs = {{"phis", phis}};
  auto fns = catalog::parse_list(phis);
  DiagTrace t = timed(rec, "run", [&] { return diag_run(parse_diag_mode(mode), fns, budget, horizon); });
  VerifyReport rep = timed(rec, "verify", [&] { return diag_verify(t, fns); });
  rec.result = rep;
  rec.trace = Json(t);
  std::cout << Json(rec).dump(2) << "\n";
  return rep.clean() ? kClean : kContract;
}

int cmd_priority(std::size_t stages, const std::string& phis) {
  RunRecord rec;
  rec.command = "priority";
  rec.flags = {{"stages", stages}};
  rec.inputs = {{"phis", phis}};
  VerifyReport validation;
  PriorityState st =
      timed(rec, "run", [&] { return priority_run(catalog::parse_list(phis), stages, &validation); });
  Json reqs = Json::array();
  for (const auto& l : requirement_report(st))
    reqs.push_back({{"n", l.n}, {"status", to_string(l.status)}, {"injuries", l.injuries}});
  rec.result = {{"validation", validation}, {"requirements", reqs}};
  rec.trace = Json(st);
  std::cout << Json(rec).dump(2) << "\n";
  return validation.clean() ? kClean : kContract;
}

// Accepts either a bare state or a run record carrying one in "trace".
int cmd_priority_check(const Output& out, const std::string& path, std::size_t margin) {
  std::ifstream in(path);
  if (!in) throw configuration_error("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  PriorityState st;
  try {
    st = (j.contains("trace") ? j.at("trace") : j).get<PriorityState>();
  } catch (const Json::exception& e) {
    throw configuration_error(std::string("not a priority state: ") + e.what());
  }
  RunRecord rec;
  rec.command = "priority-check";
  rec.flags = {{"margin", margin}};
  rec.inputs = {{"file", path}};
  VerifyReport rep = timed(rec, "check", [&] { return priority_check(st, margin); });
  rec.result = rep;
  out.emit(rec, rep.to_table());
  return rep.clean() ? kClean : kContract;
}

int cmd_retarget(const Output& out, const std::string& from, const std::string& to,
                 const std::string& via, std::optional<std::size_t> max_len_flag,
                 std::uint64_t step_cap) {
  RunRecord rec;
  rec.command = "retarget";
  EvaluatedSet src = evaluate(from);
  EvaluatedSet dst = evaluate(to);
  std::size_t max_len = resolve_max_len(max_len_flag, 8, src.max_len);
  rec.flags = {{"via", via}, {"max_len", max_len}, {"step_cap", step_cap}};
  rec.inputs = {{"from", from}, {"to", to}};
  if (!src.set.compressor) {
    if (!src.set.ranker) throw configuration_error("set '" + src.set.name + "' has no ranker");
    src.set.compressor = rank_to_compression(*src.set.ranker, src.set.member);
  }
  const Compression& f = *src.set.compressor;
  Compression there, back;
  if (via == "decider") {
    there = retarget_rec(f, dst.set);
    back = untarget_rec(there, dst.set);
  } else {
    Enumerator e = shortlex_enumerator(dst.set);
    there = retarget_re(f, e, step_cap);
    back = untarget_re(there, e, step_cap);
  }
  Json rows = Json::array();
  std::string table = "x\tf(x)\tretargeted\tround_trip\n";
  bool agree = true;
  timed(rec, "map", [&] {
    for_each_upto(max_len, [&](const BStr& x) {
      if (!src.set.member(x)) return;
      auto fx = f(x), y = there(x);
      std::optional<BStr> r = y ? back(x) : std::nullopt;
      auto show = [](const std::optional<BStr>& v) { return v ? v->str() : "undefined"; };
      if (y && r != fx) agree = false;
      rows.push_back({{"x", x}, {"f", show(fx)}, {"retargeted", show(y)}, {"round_trip", show(r)}});
      table += x.str() + "\t" + show(fx) + "\t" + show(y) + "\t" + show(r) + "\n";
    });
  });
  rec.result = {{"round_trip_agrees", agree}, {"rows", rows}};
  out.emit(rec, table);
  return agree ? kClean : kContract;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranking, compression and diagonalization toolkit for sets of binary strings"};
  app.require_subcommand(1);
  // Lets --json follow the subcommand as well as precede it.
  app.fallthrough();
  Output out;
  app.add_flag("--json", out.json, "Print a JSON run record instead of plain text");

  std::function<int()> action;

  auto* rank = app.add_subcommand("rank", "Rank of a string in a set");
  std::string expr, str;
  bool strong = false, brute = false;
  rank->add_option("EXPR", expr, "Set expression")->required();
  rank->add_option("STRING", str, "Binary string or eps")->required();
  auto* strong_opt = rank->add_flag("--strong", strong, "Require a strong ranker");
  rank->add_flag("--brute", brute, "Count members by enumeration")->excludes(strong_opt);
  rank->callback([&] { action = [&] { return cmd_rank(out, expr, str, strong, brute); }; });

  auto* sh = app.add_subcommand("shift", "Move a string n places in shortlex order");
  long long n = 0;
  sh->add_option("STRING", str, "Binary string or eps")->required();
  sh->add_option("N", n, "Offset, may be negative")->required();
  sh->callback([&] { action = [&] { return cmd_shift(out, str, n); }; });

  auto* ver = app.add_subcommand("verify", "Check a set's ranker or compressor against brute force");
  std::string kind = "strong";
  std::optional<std::size_t> max_len;
  ver->add_option("EXPR", expr, "Set expression")->required();
  ver->add_option("--kind", kind, "strong|semistrong|weak|compression")
      ->check(CLI::IsMember({"strong", "semistrong", "weak", "compression"}));
  ver->add_option("--max-len", max_len, "Longest string checked");
  ver->callback([&] { action = [&] { return cmd_verify(out, expr, kind, max_len); }; });

  auto* sat = app.add_subcommand("satcount", "Count satisfying assignments through a ranker");
  std::string via = "direct", formula;
  std::optional<unsigned> vars;
  sat->add_option("--via", via, "A|B|paired|direct")
      ->check(CLI::IsMember({"A", "B", "paired", "direct"}));
  sat->add_option("FORMULA", formula, "Bit encoding, or infix such as '(x0 & !x1)'")->required();
  sat->add_option("--vars", vars, "Variable count for infix input");
  sat->callback([&] { action = [&] { return cmd_satcount(out, via, formula, vars); }; });

  auto* dg = app.add_subcommand("diag", "Run and verify a diagonalization");
  std::string mode = "intersection", phis = "shipped";
  std::uint64_t budget = 256;
  std::size_t horizon = 9;
  dg->add_option("--mode", mode, "intersection|union|complement")
      ->check(CLI::IsMember({"intersection", "union", "complement"}));
  dg->add_option("--phis", phis, "Comma-separated partial functions, or 'shipped'");
  dg->add_option("--budget", budget, "Step budget per evaluation");
  dg->add_option("--horizon", horizon, "Longest string placed");
  dg->callback([&] { action = [&] { return cmd_diag(mode, phis, budget, horizon); }; });

  auto* pr = app.add_subcommand("priority", "Run the priority construction");
  std::size_t stages = 200;
  pr->add_option("--stages", stages, "Number of stages")->check(CLI::PositiveNumber);
  pr->add_option("--phis", phis, "Comma-separated partial functions, or 'shipped'");
  pr->callback([&] { action = [&] { return cmd_priority(stages, phis); }; });

  auto* pc = app.add_subcommand("priority-check", "Replay and check a saved priority state");
  std::string file;
  std::size_t margin = 2;
  pc->add_option("FILE", file, "JSON from the priority command")->required();
  pc->add_option("--margin", margin, "Frontier rows exempt from the path-set check");
  pc->callback([&] { action = [&] { return cmd_priority_check(out, file, margin); }; });

  auto* rt = app.add_subcommand("retarget", "Move a compression to another target set");
  std::string from = "sigma_star", to, rvia = "decider";
  std::uint64_t step_cap = 1 << 20;
  rt->add_option("--from", from, "Source set expression");
  rt->add_option("--to", to, "Target set expression")->required();
  rt->add_option("--via", rvia, "decider|enumerator")
      ->check(CLI::IsMember({"decider", "enumerator"}));
  rt->add_option("--max-len", max_len, "Longest source string listed");
  rt->add_option("--step-cap", step_cap, "Enumerator steps before giving up");
  rt->callback([&] {
    action = [&] { return cmd_retarget(out, from, to, rvia, max_len, step_cap); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kUsage;
  }

  try {
    return action();
  } catch (const parse_error& e) {
    print_error(e.kind(), e.what(), e.position());
    return kUsage;
  } catch (const contract_violation& e) {
    print_error(e.kind(), e.what());
    return kContract;
  } catch (const resource_error& e) {
    print_error(e.kind(), e.what());
    return kResource;
  } catch (const rankkit::error& e) {
    print_error(e.kind(), e.what());
    return kUsage;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kContract;
  }
}
