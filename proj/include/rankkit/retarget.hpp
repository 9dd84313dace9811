#pragma once

// Moving compressions between Sigma* and other target sets, honesty
// normalization, and the selector / co-enumerator decision procedures.
//
// A string y is identified with the natural rank_sigma_star(y), so "the
// n-th member of B" for n = rank_sigma_star(f(x)) is how a compression to
// Sigma* becomes one to B.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/polynomial.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit {

// A listing of a target set. at(i) is the (i+1)-th string output.
struct Enumerator {
  std::string name;
  std::function<BStr(const Integer&)> at;
  bool distinct = true;
};

namespace detail {

inline std::function<std::optional<Rank>(const BStr&)> target_rank(const RankedSet& b,
                                                                   std::size_t scan_len) {
  if (b.ranker) {
    return [b](const BStr& y) -> std::optional<Rank> {
      if (!b.member(y)) return std::nullopt;
      return rank_value(*b.ranker, y);
    };
  }
  auto scanner = std::make_shared<MemberScanner>(b.member, scan_len);
  return [b, scanner](const BStr& y) -> std::optional<Rank> {
    if (!b.member(y)) return std::nullopt;
    return Rank(scanner->count_le(y));
  };
}

// n -> the n-th member of b, through the strong ranker when there is one.
inline std::function<std::optional<BStr>(const Rank&)> target_select(const RankedSet& b,
                                                                     std::size_t scan_len) {
  if (b.ranker && kind_of(*b.ranker) == RankerKind::strong) {
    auto r = std::get<StrongRanker>(*b.ranker);
    // Longest length tried before giving up.
    std::size_t cap = std::max<std::size_t>(scan_len, 4096);
    return [r, cap](const Rank& n) -> std::optional<BStr> {
      if (n < 1) return std::nullopt;
      return rankkit::select_by_rank(r, n, cap);
    };
  }
  auto scanner = std::make_shared<MemberScanner>(b.member, scan_len);
  return [scanner](const Rank& n) { return scanner->nth(n); };
}

}  // namespace detail

// Lists a decidable set in shortlex order.
inline Enumerator shortlex_enumerator(const RankedSet& b, std::size_t scan_len = 24) {
  auto select = detail::target_select(b, scan_len);
  return {"shortlex:" + b.name,
          [select, name = b.name](const Integer& i) {
            auto y = select(i + 1);
            if (!y) throw resource_error("enumerator for " + name + " ran past its scan limit");
            return *y;
          },
          true};
}

// Lists every member of B twice in a row.
inline Enumerator stuttering_enumerator(const RankedSet& b, std::size_t scan_len = 24) {
  Enumerator base = shortlex_enumerator(b, scan_len);
  return {"stutter:" + b.name, [at = base.at](const Integer& i) { return at(i / 2); }, false};
}

inline Compression retarget_rec(const Compression& f, const RankedSet& b,
                                 std::size_t scan_len = 24) {
  auto nth = [select = detail::target_select(b, scan_len), name = b.name](const Rank& n) {
    auto y = select(n);
    if (!y)
      throw resource_error("fewer than " + n.str() + " members of " + name +
                           " within the scan limit");
    return *y;
  };
  Compression out;
  out.map = [f, nth](const BStr& x) -> std::optional<BStr> {
    auto y = f(x);
    if (!y) return std::nullopt;
    return nth(rank_sigma_star(*y));
  };
  if (f.witness) {
    out.witness = [w = *f.witness, rank = detail::target_rank(b, scan_len)](
                      const BStr& z) -> std::optional<BStr> {
      auto r = rank(z);
      if (!r) return std::nullopt;
      return w(unrank(*r));
    };
  }
  return out;
}

inline Compression untarget_rec(const Compression& f, const RankedSet& b,
                                std::size_t scan_len = 24) {
  Compression out;
  out.map = [f, rank = detail::target_rank(b, scan_len)](const BStr& x) -> std::optional<BStr> {
    auto y = f(x);
    if (!y) return std::nullopt;
    auto r = rank(*y);
    if (!r) return BStr{};
    return unrank(*r);
  };
  if (f.witness) {
    out.witness = [w = *f.witness, select = detail::target_select(b, scan_len)](
                      const BStr& z) -> std::optional<BStr> {
      auto y = select(rank_sigma_star(z));
      if (!y) return std::nullopt;
      return w(*y);
    };
  }
  return out;
}

// Outputs E's n-th string for n = rank_sigma_star(f(x)); undefined when
// n exceeds the step cap.
inline Compression retarget_re(const Compression& f, const Enumerator& e, std::uint64_t step_cap) {
  Compression out;
  out.map = [f, e, step_cap](const BStr& x) -> std::optional<BStr> {
    auto y = f(x);
    if (!y) return std::nullopt;
    Rank n = rank_sigma_star(*y);
    if (n > step_cap) return std::nullopt;
    return e.at(n - 1);
  };
  return out;
}

// Finds the first l with E(l) = f(x) within the step cap and outputs the
// l-th string of Sigma*. For an enumerator with repetitions l counts
// distinct outputs only.
inline Compression untarget_re(const Compression& f, const Enumerator& e, std::uint64_t step_cap) {
  Compression out;
  out.map = [f, e, step_cap](const BStr& x) -> std::optional<BStr> {
    auto y = f(x);
    if (!y) return std::nullopt;
    std::map<BStr, bool> seen;
    Rank l = 0;
    for (std::uint64_t i = 0; i < step_cap; ++i) {
      BStr s = e.at(i);
      if (!e.distinct && !seen.emplace(s, true).second) continue;
      ++l;
      if (s == *y) return unrank(l);
    }
    return std::nullopt;
  };
  return out;
}

struct HonestMap {
  std::function<BStr(const BStr&)> map;
  Polynomial g;

  // g'(n) = max(g(n), n)
  std::uint64_t bound(std::uint64_t n) const { return std::max(g(n), n); }
};

inline HonestMap honest_normalize(std::function<BStr(const BStr&)> f, Polynomial g) {
  HonestMap out;
  out.g = g;
  out.map = [f = std::move(f), g](const BStr& x) {
    BStr y = f(x);
    if (g(y.size()) >= x.size()) return y;
    return x;
  };
  return out;
}

// Greedy disjoint pairs of equal-valued strings in shortlex scan order.
inline std::vector<std::pair<BStr, BStr>> collision_pairs(
    const std::function<BStr(const BStr&)>& f, std::size_t horizon) {
  std::vector<std::pair<BStr, BStr>> out;
  std::map<BStr, BStr> waiting;
  for_each_upto(horizon, [&](const BStr& x) {
    BStr v = f(x);
    auto it = waiting.find(v);
    if (it == waiting.end()) {
      waiting.emplace(std::move(v), x);
    } else {
      out.emplace_back(it->second, x);
      waiting.erase(it);
    }
  });
  return out;
}

// A choice function that never prefers a nonmember to a member.
struct Selector {
  std::string name;
  std::function<BStr(const BStr&, const BStr&)> choose;
};

inline Selector membership_selector(Predicate member, std::string name = "membership") {
  return {std::move(name), [member = std::move(member)](const BStr& x, const BStr& y) {
            return member(y) && !member(x) ? y : x;
          }};
}

namespace detail {

inline BStr checked_choice(const Selector& s, const BStr& x, const BStr& y) {
  BStr c = s.choose(x, y);
  if (c != x && c != y)
    throw contract_violation("selector " + s.name + " chose " + c.str() + " from {" + x.str() +
                             ", " + y.str() + "}");
  return c;
}

inline std::vector<BStr> honest_preimages(const std::function<BStr(const BStr&)>& f,
                                          const Polynomial& g, const BStr& z) {
  std::vector<BStr> out;
  std::uint64_t len = g(z.size());
  if (len > 24) throw resource_error("preimage search beyond length 24");
  for_each_upto(len, [&](const BStr& w) {
    if (f(w) == z) out.push_back(w);
  });
  return out;
}

}  // namespace detail

// The element of each pair the selector does not choose.
inline std::vector<BStr> selector_complement_subset(
    const std::vector<std::pair<BStr, BStr>>& pairs, const Selector& s) {
  std::vector<BStr> out;
  for (const auto& [x, y] : pairs) out.push_back(detail::checked_choice(s, x, y) == x ? y : x);
  return out;
}

// x is a member iff it wins the selector tournament over
// Q_z = {w : f(w) = z, |w| <= g(|z|)}, z = f(x).
inline bool decide_via_selector(const std::function<BStr(const BStr&)>& f, const Polynomial& g,
                                const Selector& s, const BStr& x) {
  BStr z = f(x);
  auto q = detail::honest_preimages(f, g, z);
  if (q.empty()) throw contract_violation("no preimage of " + z.str() + " within the bound");
  BStr champion = q.front();
  for (std::size_t i = 1; i < q.size(); ++i) champion = detail::checked_choice(s, champion, q[i]);
  return champion == x;
}

// Runs the acceptor of the complement on Q_{f(x)} with growing budgets
// until one candidate is left; nullopt if the budget runs out first.
inline std::optional<bool> decide_via_coenumerator(const std::function<BStr(const BStr&)>& f,
                                                   const Polynomial& g, const PartialFn& m,
                                                   const BStr& x, std::uint64_t budget) {
  BStr z = f(x);
  auto q = detail::honest_preimages(f, g, z);
  if (q.empty()) throw contract_violation("no preimage of " + z.str() + " within the bound");
  for (std::uint64_t s = 0;; ++s) {
    if (q.size() == 1) return q.front() == x;
    if (s >= budget) return std::nullopt;
    std::vector<BStr> alive;
    for (const auto& w : q)
      if (!m(w, s + 1)) alive.push_back(w);
    if (alive.empty()) throw contract_violation("acceptor rejected every candidate for " + z.str());
    q = std::move(alive);
  }
}

}  // namespace rankkit
