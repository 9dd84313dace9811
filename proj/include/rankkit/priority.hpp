#pragma once

// A finite-injury priority construction, simulated stage by stage.
//
// Strings are identified with triples <t, j, k> (t < 4) through
// index(x) = 4 * pair(j, k) + t with the diagonal pairing. The map `f_map`
// links the triples of each column k into a tree (see below); the printed
// set C is grown so that it stays a path set for f, and the two colour
// classes C0, C1 of C are pulled apart by diagonalizing against a list of
// partial functions.
//
//   ... <3,1,k> -> ... ;  <3,0,k> -> <3,1,k>
//   <0,0,k> -> <3,0,k>   <2,0,k> -> <3,0,k>   <1,0,k> -> <0,0,k>
//   <t,j,k> -> <t,j-1,k> for t < 3, j > 0

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit {

struct Triple {
  unsigned t = 0;
  std::uint64_t j = 0, k = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  std::string str() const {
    return "<" + std::to_string(t) + "," + std::to_string(j) + "," + std::to_string(k) + ">";
  }
};

inline Integer cantor_pair(std::uint64_t j, std::uint64_t k) {
  Integer s = Integer(j) + k;
  return s * (s + 1) / 2 + k;
}

inline BStr triple_to_bstr(const Triple& x) {
  if (x.t > 3) throw domain_error("triple type must be below 4");
  return from_index(4 * cantor_pair(x.j, x.k) + x.t);
}

inline Triple bstr_to_triple(const BStr& x) {
  Integer idx = index(x);
  unsigned t = static_cast<unsigned>(idx % 4);
  Integer c = idx / 4;
  Integer w = (boost::multiprecision::sqrt(Integer(8 * c + 1)) - 1) / 2;
  Integer k = c - w * (w + 1) / 2;
  Integer j = w - k;
  if (j > Integer(UINT64_MAX) || k > Integer(UINT64_MAX))
    throw resource_error("triple coordinates exceed 64 bits");
  return {t, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(k)};
}

inline Triple f_map(const Triple& x) {
  if (x.t == 3) return {3, x.j + 1, x.k};
  if (x.j > 0) return {x.t, x.j - 1, x.k};
  if (x.t == 1) return {0, 0, x.k};
  return {3, 0, x.k};
}

// The triples y with f_map(y) = x.
inline std::vector<Triple> f_preimages(const Triple& x) {
  if (x.t == 3) {
    if (x.j > 0) return {{3, x.j - 1, x.k}};
    return {{0, 0, x.k}, {2, 0, x.k}};
  }
  std::vector<Triple> out{{x.t, x.j + 1, x.k}};
  if (x.t == 0 && x.j == 0) out.push_back({1, 0, x.k});
  return out;
}

// The 2-colouring with colour(<0,0,k>) = 0 that flips along every edge.
inline int color(const Triple& x) {
  if (x.t == 0 || x.t == 2) return static_cast<int>(x.j % 2);
  return static_cast<int>((x.j + 1) % 2);
}

struct QEntry {
  unsigned t = 0;
  std::uint64_t k = 0;
  std::size_t stage = 0;
  // Value of the counter when the entry was queued.
  std::uint64_t b = 0;

  friend bool operator==(const QEntry&, const QEntry&) = default;
};

struct RPair {
  std::size_t n = 0;
  std::uint64_t k = 0;

  friend auto operator<=>(const RPair&, const RPair&) = default;
};

// Would w be printed by printing stages alone under the current queue?
inline bool would_print(const std::vector<QEntry>& q, const Triple& w) {
  for (const auto& e : q) {
    if (e.k != w.k) continue;
    if (w.t == 3) return true;
    if (w.t == e.t) return true;
    if (e.t == 1 && w.t == 0 && w.j == 0) return true;
  }
  return false;
}

// Everything printing stages P_1..P_stage print for the queue.
inline std::set<Triple> print_closure(const std::vector<QEntry>& q, std::size_t stage) {
  std::set<Triple> out;
  for (const auto& e : q) {
    for (std::uint64_t j = 0; j <= stage; ++j) {
      out.insert({3, j, e.k});
      out.insert({e.t, j, e.k});
    }
    if (e.t == 1) out.insert({0, 0, e.k});
  }
  return out;
}

struct CaseFire {
  std::size_t n = 0;
  std::uint64_t k = 0;
  BStr output;
  Triple w;
  int case_taken = 0;
  std::optional<QEntry> queued;

  friend bool operator==(const CaseFire&, const CaseFire&) = default;
};

struct Injury {
  std::size_t n = 0;   // the requirement whose witness got printed
  std::size_t by = 0;  // the requirement whose action printed it
  std::size_t stage = 0;
  Triple witness;

  friend bool operator==(const Injury&, const Injury&) = default;
};

struct StageEvent {
  std::size_t i = 0;
  std::vector<RPair> r_added, r_removed;
  std::optional<CaseFire> fire;
  std::vector<Injury> injuries;
  std::uint64_t b_after = 0;

  friend bool operator==(const StageEvent&, const StageEvent&) = default;
};

struct PriorityState {
  std::vector<std::string> phi_names;
  std::size_t stages = 0;
  std::vector<QEntry> q;
  std::set<RPair> r;
  std::uint64_t b = 0;
  std::set<Triple> printed;
  std::vector<StageEvent> log;

  friend bool operator==(const PriorityState&, const PriorityState&) = default;
};

class PrioritySimulator {
 public:
  explicit PrioritySimulator(std::vector<PartialFn> phis) : phis_(std::move(phis)) {
    for (const auto& p : phis_) state_.phi_names.push_back(p.name);
  }

  const PriorityState& state() const { return state_; }

  // Runs E_i then P_i for the next i.
  const StageEvent& step() {
    const std::size_t i = ++state_.stages;
    StageEvent ev;
    ev.i = i;
    add_pair(ev, {i, state_.b});
    ++state_.b;

    std::optional<CaseFire> fire;
    for (const auto& pr : state_.r) {
      if (pr.n == 0 || pr.n > phis_.size()) continue;  // everywhere divergent
      auto out = phis_[pr.n - 1](triple_to_bstr({0, 0, pr.k}), i);
      if (!out) continue;
      fire = CaseFire{pr.n, pr.k, *out, bstr_to_triple(*out), 0, std::nullopt};
      break;
    }
    if (fire) dispatch(*fire, ev, i);
    ev.fire = fire;
    ev.b_after = state_.b;
    print(i);
    state_.log.push_back(std::move(ev));
    return state_.log.back();
  }

 private:
  void add_pair(StageEvent& ev, RPair p) {
    state_.r.insert(p);
    ev.r_added.push_back(p);
  }

  void enqueue(unsigned t, std::uint64_t k, std::size_t i, CaseFire& fire) {
    QEntry e{t, k, i, state_.b};
    state_.q.push_back(e);
    fire.queued = e;
  }

  void dispatch(CaseFire& fire, StageEvent& ev, std::size_t i) {
    const Triple& w = fire.w;
    const bool same_column = w.k == fire.k;
    if (color(w) == 0) {
      fire.case_taken = 1;
      enqueue(0, fire.k, i, fire);
    } else if (!same_column) {
      if (!would_print(state_.q, w)) {
        fire.case_taken = 2;
        enqueue(0, fire.k, i, fire);
      } else {
        fire.case_taken = 3;
      }
    } else if (w.t == 0) {
      fire.case_taken = 4;
      enqueue(1, fire.k, i, fire);
    } else if (w.t == 1 || w.t == 2) {
      fire.case_taken = 5;
      enqueue(0, fire.k, i, fire);
    } else {
      fire.case_taken = 6;
      enqueue(2, fire.k, i, fire);
    }

    // Earlier case-2 witnesses that this queue entry now prints.
    if (fire.queued) {
      std::vector<OpenWitness> still;
      for (const auto& o : open_) {
        if (would_print(state_.q, o.w)) ev.injuries.push_back({o.n, fire.n, i, o.w});
        else still.push_back(o);
      }
      open_ = std::move(still);
    }
    // A new action for n supersedes its older open witness.
    open_.erase(std::remove_if(open_.begin(), open_.end(),
                               [&](const OpenWitness& o) { return o.n == fire.n; }),
                open_.end());
    if (fire.case_taken == 2) open_.push_back({fire.n, w});

    // The counter never moves backwards, so queued columns stay distinct.
    state_.b = std::max({state_.b, fire.k, w.k}) + 1;
    for (auto it = state_.r.begin(); it != state_.r.end();) {
      if (it->n >= fire.n) {
        ev.r_removed.push_back(*it);
        it = state_.r.erase(it);
      } else {
        ++it;
      }
    }
    for (std::size_t n = fire.n + 1; n <= i; ++n) {
      add_pair(ev, {n, state_.b});
      ++state_.b;
    }
  }

  void print(std::size_t i) {
    for (const auto& e : state_.q) {
      std::uint64_t& done = printed_upto_[e.k];
      std::uint64_t from = printed_any_[e.k] ? done + 1 : 0;
      for (std::uint64_t j = from; j <= i; ++j) {
        state_.printed.insert({3, j, e.k});
        state_.printed.insert({e.t, j, e.k});
      }
      if (e.t == 1) state_.printed.insert({0, 0, e.k});
      done = i;
      printed_any_[e.k] = true;
    }
  }

  struct OpenWitness {
    std::size_t n;
    Triple w;
  };

  std::vector<PartialFn> phis_;
  PriorityState state_;
  std::vector<OpenWitness> open_;
  std::map<std::uint64_t, std::uint64_t> printed_upto_;
  std::map<std::uint64_t, bool> printed_any_;
};

// Checks one logged stage against the state before and after it.
inline VerifyReport validate_stage(const PriorityState& before, const PriorityState& after,
                                   const StageEvent& ev) {
  VerifyReport rep;
  rep.subject = "priority stage " + std::to_string(ev.i);
  const BStr where = from_index(ev.i);
  ++rep.checked;
  std::set<std::uint64_t> ks;
  for (const auto& e : after.q)
    if (!ks.insert(e.k).second)
      rep.fail(where, "distinct queue columns", "column " + std::to_string(e.k) + " twice",
               "queue");
  for (std::size_t a = 1; a < after.q.size(); ++a)
    if (after.q[a].b <= after.q[a - 1].b)
      rep.fail(where, "counter increases between queue additions",
               std::to_string(after.q[a - 1].b) + " then " + std::to_string(after.q[a].b),
               "counter");
  if (after.q.size() < before.q.size() ||
      !std::equal(before.q.begin(), before.q.end(), after.q.begin()))
    rep.fail(where, "queue only grows", "queue changed", "queue");
  if (!ev.fire && !ev.r_removed.empty())
    rep.fail(where, "no removals without an action", std::to_string(ev.r_removed.size()),
             "requirements");
  if (ev.fire)
    for (const auto& p : ev.r_removed)
      if (p.n < ev.fire->n)
        rep.fail(where, "removed pairs have n >= " + std::to_string(ev.fire->n),
                 "removed n = " + std::to_string(p.n), "requirements");
  std::set<std::size_t> ns;
  std::set<std::uint64_t> rks;
  for (const auto& p : after.r) {
    if (!ns.insert(p.n).second)
      rep.fail(where, "one pair per requirement", "n = " + std::to_string(p.n) + " twice",
               "requirements");
    if (!rks.insert(p.k).second)
      rep.fail(where, "distinct pair columns", "k = " + std::to_string(p.k) + " twice",
               "requirements");
  }
  for (const auto& inj : ev.injuries)
    if (inj.by >= inj.n)
      rep.fail(where, "injury by a higher-priority requirement",
               std::to_string(inj.n) + " injured by " + std::to_string(inj.by), "injury");
  if (after.b < before.b) rep.fail(where, "counter never decreases", "decreased", "counter");
  return rep;
}

inline PriorityState priority_run(const std::vector<PartialFn>& phis, std::size_t stages,
                                  VerifyReport* validation = nullptr) {
  if (stages == 0) throw configuration_error("priority_run: at least one stage required");
  PrioritySimulator sim(phis);
  for (std::size_t s = 0; s < stages; ++s) {
    if (validation) {
      PriorityState before = sim.state();
      const auto& ev = sim.step();
      validation->merge(validate_stage(before, sim.state(), ev));
    } else {
      sim.step();
    }
  }
  if (validation) validation->subject = "priority run";
  return sim.state();
}

// Path-set conditions for every printed triple with j <= stage - margin;
// triples nearer the frontier are only counted.
inline VerifyReport path_set_check(const std::set<Triple>& printed, std::size_t stage,
                                   std::size_t margin) {
  VerifyReport rep;
  rep.subject = "path set";
  std::uint64_t exempt = 0;
  for (const auto& x : printed) {
    if (x.j + margin > stage) {
      ++exempt;
      continue;
    }
    ++rep.checked;
    const BStr where = triple_to_bstr(x);
    if (!printed.count(f_map(x)))
      rep.fail(where, "successor " + f_map(x).str() + " printed", "missing", "path set");
    int preds = 0;
    for (const auto& y : f_preimages(x)) preds += printed.count(y);
    if (preds != 1)
      rep.fail(where, "exactly one printed predecessor of " + x.str(), std::to_string(preds),
               "path set");
  }
  rep.notes.push_back("frontier triples exempt: " + std::to_string(exempt));
  return rep;
}

inline VerifyReport path_set_check(const PriorityState& st, std::size_t margin) {
  return path_set_check(st.printed, st.stages, margin);
}

inline std::pair<std::set<Triple>, std::set<Triple>> split_by_color(
    const std::set<Triple>& printed) {
  std::pair<std::set<Triple>, std::set<Triple>> out;
  for (const auto& x : printed) (color(x) == 0 ? out.first : out.second).insert(x);
  return out;
}

enum class RequirementStatus { satisfied, injured, pending };

inline const char* to_string(RequirementStatus s) {
  switch (s) {
    case RequirementStatus::satisfied: return "satisfied";
    case RequirementStatus::injured: return "injured";
    case RequirementStatus::pending: return "pending";
  }
  return "?";
}

struct RequirementLine {
  std::size_t n = 0;
  RequirementStatus status = RequirementStatus::pending;
  std::size_t injuries = 0;
  // Stage of the latest action for n, 0 if none.
  std::size_t last_action = 0;
  // Stage of the latest injury of n, 0 if none.
  std::size_t last_injury = 0;
};

// Lifecycle of every requirement that ever had a pair. Throws
// contract_violation if an injury is attributed to a lower-priority
// requirement.
inline std::vector<RequirementLine> requirement_report(const PriorityState& st) {
  std::map<std::size_t, RequirementLine> lines;
  for (const auto& ev : st.log) {
    for (const auto& p : ev.r_added) lines[p.n].n = p.n;
    if (ev.fire) {
      auto& l = lines[ev.fire->n];
      l.n = ev.fire->n;
      l.status = RequirementStatus::satisfied;
      l.last_action = ev.i;
    }
    for (const auto& inj : ev.injuries) {
      if (inj.by >= inj.n)
        throw contract_violation("requirement " + std::to_string(inj.n) +
                                 " injured by lower-priority " + std::to_string(inj.by));
      auto& l = lines[inj.n];
      l.status = RequirementStatus::injured;
      ++l.injuries;
      l.last_injury = ev.i;
    }
  }
  std::vector<RequirementLine> out;
  for (auto& [n, l] : lines) out.push_back(l);
  return out;
}

// A recursive bijection and its inverse, as compressions in both
// directions. The inverse relation is checked on all |x| <= check_len.
inline std::pair<Compression, Compression> iso_to_compressions(
    std::function<BStr(const BStr&)> g, std::function<BStr(const BStr&)> g_inv,
    std::size_t check_len = 10) {
  for_each_upto(check_len, [&](const BStr& x) {
    if (g_inv(g(x)) != x || g(g_inv(x)) != x)
      throw contract_violation("iso_to_compressions: maps are not mutually inverse at " + x.str());
  });
  Compression fwd{total(g), total(g_inv)};
  Compression back{total(g_inv), total(g)};
  return {fwd, back};
}

}  // namespace rankkit
