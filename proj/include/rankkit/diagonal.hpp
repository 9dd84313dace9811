#pragma once

// Bounded replays of three stage-by-stage diagonalizations. Each stage takes
// the next partial function and extends A (and B) so that the function
// fails to compress the diagonal set (A ∩ B, A ∪ B, or the complement of A)
// while A and B keep exactly one member per block x0/x1 (or x00..x11).
//
// "phi(x) is defined" means it halts within the step budget; searches over
// "all larger x" stop at the length horizon. Both bounds are recorded in
// the trace.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rankkit/constructions.hpp"
#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit {

enum class DiagMode { intersection, union_, complement };

inline const char* to_string(DiagMode m) {
  switch (m) {
    case DiagMode::intersection: return "intersection";
    case DiagMode::union_: return "union";
    case DiagMode::complement: return "complement";
  }
  return "?";
}

inline DiagMode parse_diag_mode(const std::string& s) {
  if (s == "intersection") return DiagMode::intersection;
  if (s == "union") return DiagMode::union_;
  if (s == "complement") return DiagMode::complement;
  throw configuration_error("unknown diagonal mode: " + s);
}

enum class WitnessKind { non_surjective, collision, undefined };

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::non_surjective: return "non_surjective";
    case WitnessKind::collision: return "collision";
    case WitnessKind::undefined: return "undefined";
  }
  return "?";
}

inline WitnessKind parse_witness_kind(const std::string& s) {
  if (s == "non_surjective") return WitnessKind::non_surjective;
  if (s == "collision") return WitnessKind::collision;
  if (s == "undefined") return WitnessKind::undefined;
  throw parse_error("unknown witness kind: " + s, 0);
}

// non_surjective: `first` is the missed value, `second` the input it came
// from. collision: two inputs with equal outputs. undefined: `first` is the
// input on which the function did not halt.
struct DiagWitness {
  WitnessKind kind = WitnessKind::undefined;
  BStr first, second;

  friend bool operator==(const DiagWitness&, const DiagWitness&) = default;
};

struct DiagStage {
  std::size_t i = 0;
  std::string phi;
  int case_taken = 0;
  BStr m_before, m_after;
  std::vector<BStr> added_a, added_b;
  DiagWitness witness;

  friend bool operator==(const DiagStage&, const DiagStage&) = default;
};

struct DiagTrace {
  DiagMode mode = DiagMode::intersection;
  std::uint64_t budget = 0;
  std::size_t horizon = 0;
  std::vector<DiagStage> stages;
  std::set<BStr> a_prefix, b_prefix;
  BStr m_final;

  friend bool operator==(const DiagTrace&, const DiagTrace&) = default;
};

namespace detail {

// The block suffix width: one bit for the pair modes, two for complement.
inline std::size_t block_bits(DiagMode m) { return m == DiagMode::complement ? 2 : 1; }

inline BStr block_start(DiagMode mode, const BStr& m) {
  return m + BStr::zeros(block_bits(mode));
}

class DiagEngine {
 public:
  DiagEngine(DiagMode mode, std::uint64_t budget, std::size_t horizon)
      : mode_(mode), budget_(budget), horizon_(horizon) {}

  DiagTrace run(const std::vector<PartialFn>& phis) {
    DiagTrace t;
    t.mode = mode_;
    t.budget = budget_;
    t.horizon = horizon_;
    for (std::size_t i = 0; i < phis.size(); ++i) t.stages.push_back(stage(i + 1, phis[i]));
    t.a_prefix = a_;
    t.b_prefix = b_;
    t.m_final = m_;
    return t;
  }

 private:
  std::optional<BStr> eval(const PartialFn& phi, const BStr& x) const { return phi(x, budget_); }

  // Members of the diagonal set placed so far.
  std::vector<BStr> diagonal_members() const {
    std::vector<BStr> out;
    switch (mode_) {
      case DiagMode::intersection:
        for (const auto& x : a_)
          if (b_.count(x)) out.push_back(x);
        break;
      case DiagMode::union_:
        std::set_union(a_.begin(), a_.end(), b_.begin(), b_.end(), std::back_inserter(out));
        break;
      case DiagMode::complement: {
        BStr end = block_start(mode_, m_);
        for (BStr x; x < end; advance(x))
          if (!a_.count(x)) out.push_back(x);
        break;
      }
    }
    return out;
  }

  // The least x > after (|x| <= horizon) with phi(x) = v.
  std::optional<BStr> search_above(const PartialFn& phi, BStr after, const BStr& v) const {
    for (advance(after); after.size() <= horizon_; advance(after)) {
      auto y = eval(phi, after);
      if (y && *y == v) return after;
    }
    return std::nullopt;
  }

  void add(std::set<BStr>& s, std::vector<BStr>& log, const BStr& x) {
    if (x.size() > horizon_)
      throw resource_error("diagonal stage " + std::to_string(stage_no_) + ": horizon " +
                           std::to_string(horizon_) + " too small to place " + x.str());
    if (s.insert(x).second) log.push_back(x);
  }

  DiagStage stage(std::size_t i, const PartialFn& phi) {
    stage_no_ = i;
    if (m_.size() + 2 > horizon_)
      throw resource_error("diagonal stage " + std::to_string(i) + ": horizon " +
                           std::to_string(horizon_) + " too small for frontier " + m_.str());
    DiagStage st;
    st.i = i;
    st.phi = phi.name;
    st.m_before = m_;
    switch (mode_) {
      case DiagMode::intersection: intersection_stage(phi, st); break;
      case DiagMode::union_: union_stage(phi, st); break;
      case DiagMode::complement: complement_stage(phi, st); break;
    }
    st.m_after = m_;
    return st;
  }

  // Undefined on `probe`, or some placed diagonal member collides with it.
  std::optional<DiagWitness> early_failure(const PartialFn& phi, const BStr& probe,
                                           const std::optional<BStr>& v) const {
    if (!v) return DiagWitness{WitnessKind::undefined, probe, {}};
    for (const auto& x : diagonal_members()) {
      auto y = eval(phi, x);
      if (y && *y == *v) return DiagWitness{WitnessKind::collision, x, probe};
    }
    return std::nullopt;
  }

  void both(DiagStage& st, const BStr& x) {
    add(a_, st.added_a, x);
    add(b_, st.added_b, x);
  }

  void intersection_stage(const PartialFn& phi, DiagStage& st) {
    const BStr m0 = m_ + '0', m1 = m_ + '1';
    const auto v = eval(phi, m0);
    if (auto w = early_failure(phi, m0, v)) {
      st.case_taken = 2;
      both(st, m0);
      m_ = shift(m_, 1);
      st.witness = *w;
      return;
    }
    // m1 stays outside A ∩ B in the first case, so the search starts above it.
    if (auto x = search_above(phi, m1, *v)) {
      st.case_taken = 3;
      BStr y = x->drop_last(1);
      for (BStr z = m_; z < y; z = shift(z, 1)) both(st, z + '0');
      both(st, *x);
      m_ = shift(y, 1);
      st.witness = {WitnessKind::collision, m0, *x};
      return;
    }
    st.case_taken = 1;
    add(a_, st.added_a, m0);
    add(b_, st.added_b, m1);
    both(st, shift(m_, 1) + '0');
    m_ = shift(m_, 2);
    st.witness = {WitnessKind::non_surjective, *v, m0};
  }

  void union_stage(const PartialFn& phi, DiagStage& st) {
    const BStr m0 = m_ + '0';
    const auto v = eval(phi, m0);
    if (auto w = early_failure(phi, m0, v)) {
      st.case_taken = 2;
      both(st, m0);
      m_ = shift(m_, 1);
      st.witness = *w;
      return;
    }
    if (auto x = search_above(phi, m0, *v)) {
      st.case_taken = 3;
      // The least m' with m'0 > x is x without its last bit, shifted once.
      BStr next = shift(x->drop_last(1), 1);
      for (BStr y = m_; y < next; y = shift(y, 1)) {
        add(a_, st.added_a, y + '0');
        add(b_, st.added_b, y + '1');
      }
      m_ = next;
      st.witness = {WitnessKind::collision, m0, *x};
      return;
    }
    st.case_taken = 1;
    both(st, m_ + '1');
    m_ = shift(m_, 1);
    st.witness = {WitnessKind::non_surjective, *v, m0};
  }

  void complement_stage(const PartialFn& phi, DiagStage& st) {
    const BStr m00 = m_ + BStr("00");
    const auto v = eval(phi, m00);
    if (auto w = early_failure(phi, m00, v)) {
      st.case_taken = 2;
      add(a_, st.added_a, m_ + BStr("01"));
      m_ = shift(m_, 1);
      st.witness = *w;
      return;
    }
    static const char* kTails[] = {"01", "10", "11"};
    for (const char* tail : kTails) {
      BStr x = m_ + BStr(tail);
      auto y = eval(phi, x);
      if (!y || *y != *v) continue;
      st.case_taken = 3;
      for (const char* other : kTails) {
        if (BStr(other) == BStr(tail)) continue;
        add(a_, st.added_a, m_ + BStr(other));
        break;
      }
      m_ = shift(m_, 1);
      st.witness = {WitnessKind::collision, m00, x};
      return;
    }
    if (auto x = search_above(phi, m_ + BStr("11"), *v)) {
      st.case_taken = 4;
      BStr y = x->drop_last(2);
      add(a_, st.added_a, m_ + BStr("01"));
      for (BStr z = shift(m_, 1); z < y; z = shift(z, 1)) add(a_, st.added_a, z + BStr("11"));
      for (const char* tail : {"00", "01", "10", "11"}) {
        BStr w = y + BStr(tail);
        if (w == *x) continue;
        add(a_, st.added_a, w);
        break;
      }
      m_ = shift(y, 1);
      st.witness = {WitnessKind::collision, m00, *x};
      return;
    }
    st.case_taken = 1;
    add(a_, st.added_a, m00);
    m_ = shift(m_, 1);
    st.witness = {WitnessKind::non_surjective, *v, m00};
  }

  DiagMode mode_;
  std::uint64_t budget_;
  std::size_t horizon_;
  std::size_t stage_no_ = 0;
  std::set<BStr> a_, b_;
  BStr m_;
};

}  // namespace detail

inline DiagTrace diag_run(DiagMode mode, const std::vector<PartialFn>& phis, std::uint64_t budget,
                          std::size_t horizon) {
  if (budget == 0 || horizon == 0) throw configuration_error("diag_run: budgets must be positive");
  return detail::DiagEngine(mode, budget, horizon).run(phis);
}

// Checks the block invariant, the witnesses (re-evaluating each function),
// the stage bookkeeping, and the weak rankers of the prefixes.
// Non-surjectivity is only checked up to the trace's horizon.
inline VerifyReport diag_verify(const DiagTrace& t, const std::vector<PartialFn>& phis) {
  VerifyReport rep;
  rep.subject = std::string("diagonal/") + to_string(t.mode);
  const std::size_t bits = detail::block_bits(t.mode);
  const unsigned arity = bits == 1 ? 2 : 4;
  const BStr frontier = detail::block_start(t.mode, t.m_final);
  if (!t.stages.empty())
    rep.notes.push_back("non-surjectivity checked relative to horizon " +
                        std::to_string(t.horizon) + " and budget " + std::to_string(t.budget));

  // (i) exactly one member per block below the frontier, nothing at or above it.
  auto check_blocks = [&](const std::set<BStr>& s, const char* name) {
    for (BStr z; z < t.m_final; advance(z)) {
      int hits = 0;
      for (std::uint64_t v = 0; v < arity; ++v) hits += s.count(z + from_numeral(v, bits));
      ++rep.checked;
      if (hits != 1)
        rep.fail(z, "one member in block", std::to_string(hits) + " in " + name, "pairing");
    }
    for (const auto& x : s) {
      ++rep.checked;
      if (x.size() < bits || x >= frontier)
        rep.fail(x, "member below frontier " + frontier.str(), std::string("in ") + name,
                 "pairing");
    }
  };
  check_blocks(t.a_prefix, "A");
  if (t.mode != DiagMode::complement) check_blocks(t.b_prefix, "B");

  auto in_diagonal = [&](const BStr& x) {
    switch (t.mode) {
      case DiagMode::intersection: return t.a_prefix.count(x) && t.b_prefix.count(x);
      case DiagMode::union_: return t.a_prefix.count(x) || t.b_prefix.count(x);
      case DiagMode::complement: return x < frontier && !t.a_prefix.count(x);
    }
    return false;
  };
  std::vector<BStr> diagonal;
  for (BStr x; x < frontier; advance(x))
    if (in_diagonal(x)) diagonal.push_back(x);

  // (ii) stage bookkeeping and witnesses.
  BStr prev_m;
  for (std::size_t s = 0; s < t.stages.size(); ++s) {
    const auto& st = t.stages[s];
    const BStr where = st.m_before;
    ++rep.checked;
    if (s < phis.size() && phis[s].name != st.phi) {
      rep.fail(where, phis[s].name, st.phi, "stage function");
      continue;
    }
    if (s >= phis.size()) {
      rep.fail(where, "a function for stage " + std::to_string(st.i), "none", "stage function");
      continue;
    }
    const PartialFn& phi = phis[s];
    const int last_case = t.mode == DiagMode::complement ? 4 : 3;
    if (st.case_taken < 1 || st.case_taken > last_case)
      rep.fail(where, "case 1.." + std::to_string(last_case), std::to_string(st.case_taken),
               "stage case");
    if (st.m_before != prev_m) rep.fail(where, prev_m.str(), st.m_before.str(), "stage chain");
    if (!(st.m_after > st.m_before))
      rep.fail(where, "m increases", st.m_after.str(), "stage progress");
    prev_m = st.m_after;
    const BStr floor = detail::block_start(t.mode, st.m_before);
    bool new_diagonal = false;
    for (const auto* log : {&st.added_a, &st.added_b}) {
      for (const auto& x : *log) {
        if (x < floor) rep.fail(x, ">= " + floor.str(), x.str(), "stage floor");
      }
    }
    for (BStr x = floor; x < detail::block_start(t.mode, st.m_after); advance(x))
      new_diagonal = new_diagonal || in_diagonal(x);
    if (!new_diagonal) rep.fail(where, "a new diagonal member", "none", "stage progress");

    const auto& w = st.witness;
    auto out = [&](const BStr& x) { return phi(x, t.budget); };
    auto is_diag = [&](const BStr& x) { return in_diagonal(x) != 0; };
    switch (w.kind) {
      case WitnessKind::collision: {
        auto a = out(w.first), b = out(w.second);
        if (w.first == w.second || !is_diag(w.first) || !is_diag(w.second) || !a || !b || *a != *b)
          rep.fail(where, "collision between diagonal members",
                   w.first.str() + "," + w.second.str(), "witness");
        break;
      }
      case WitnessKind::undefined:
        if (!is_diag(w.first) || out(w.first))
          rep.fail(where, "no halt on a diagonal member", w.first.str(), "witness");
        break;
      case WitnessKind::non_surjective: {
        auto origin = out(w.second);
        if (!origin || *origin != w.first || is_diag(w.second))
          rep.fail(where, "origin outside the diagonal set mapping to " + w.first.str(),
                   w.second.str(), "witness");
        for (const auto& x : diagonal) {
          auto y = out(x);
          if (y && *y == w.first)
            rep.fail(x, "no diagonal member maps to " + w.first.str(), y->str(), "witness");
        }
        // The stage's search: nothing above the excluded block maps there.
        BStr from = t.mode == DiagMode::intersection ? st.m_before + '1' : w.second;
        for (advance(from); from.size() <= t.horizon; advance(from)) {
          auto y = out(from);
          if (y && *y == w.first)
            rep.fail(from, "no diagonal member above maps to " + w.first.str(), y->str(),
                     "witness");
        }
        break;
      }
    }
  }

  // (iii) the one-per-block weak ranker is right on the prefixes.
  auto weak = paired_weak_ranker(arity);
  auto check_weak = [&](const std::set<BStr>& s, const char* name) {
    RankedSet rs{std::string("prefix ") + name, [&s](const BStr& x) { return s.count(x) > 0; },
                 Ranker{weak}, std::nullopt, std::nullopt};
    rep.merge(verify_weak(rs, frontier.size()));
  };
  check_weak(t.a_prefix, "A");
  if (t.mode != DiagMode::complement) check_weak(t.b_prefix, "B");
  return rep;
}

inline VerifyReport diag_verify(const DiagTrace& t) {
  std::vector<PartialFn> phis;
  for (const auto& st : t.stages) phis.push_back(catalog::by_name(st.phi));
  return diag_verify(t, phis);
}

}  // namespace rankkit
