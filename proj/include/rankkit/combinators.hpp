#pragma once

// Closure constructions on rankers and compressors. Each function returns
// a new ranker or compressor built from the ones it is given.

#include <algorithm>
#include <map>
#include <set>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/polynomial.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit {

namespace detail {

inline Rank nonneg(Rank v, const char* what, const BStr& x) {
  if (v < 0)
    throw contract_violation(std::string(what) + ": negative rank " + v.str() + " at " +
                             x.str());
  return v;
}

}  // namespace detail

// ------------------------------------------------------------ boolean ops

enum class KnownSide { have_union, have_intersection };

// rank(A n B) + rank(A u B) = rank(A) + rank(B): given one side, rank the
// other.
inline StrongRanker boolean_identity_rank(StrongRanker rA, StrongRanker rB,
                                          StrongRanker known, KnownSide side) {
  const char* what = side == KnownSide::have_union ? "intersection from union"
                                                   : "union from intersection";
  return {[=](const BStr& x) { return detail::nonneg(rA(x) + rB(x) - known(x), what, x); }};
}

inline StrongRanker complement_strong(StrongRanker rA) {
  return {[rA = std::move(rA)](const BStr& x) {
    return detail::nonneg(rank_sigma_star(x) - rA(x), "complement", x);
  }};
}

inline StrongRanker zero_ranker() {
  return {[](const BStr&) { return Rank(0); }};
}

inline StrongRanker sigma_star_ranker() {
  return {[](const BStr& x) { return rank_sigma_star(x); }};
}

// ------------------------------------------------------------------ joins

// The join A (+) B = A0 u B1.
inline Predicate join_member(Predicate a, Predicate b) {
  return [a = std::move(a), b = std::move(b)](const BStr& x) {
    if (x.empty()) return false;
    BStr y = x.drop_last(1);
    return x.back() == '0' ? a(y) : b(y);
  };
}

// Strings ending in 0 below y0 are z0 with z <= y; those ending in 1 are z1
// with z < y. At y = eps the second group is empty, so shift(y,-1) (which
// would clamp back to eps) must not be consulted.
inline StrongRanker join_strong(StrongRanker rA, StrongRanker rB) {
  return {[rA = std::move(rA), rB = std::move(rB)](const BStr& x) -> Rank {
    if (x.empty()) return 0;
    BStr y = x.drop_last(1);
    if (x.back() == '1') return rA(y) + rB(y);
    if (y.empty()) return rA(y);
    return rA(y) + rB(shift(y, -1));
  }};
}

// h(x0) = f(x)0 covers Sigma*0; h(x1) = shift(g(x)0, -1) covers {eps} u Sigma*1.
inline Compression join_compress(Compression fA, Compression gB) {
  Compression h;
  h.map = [fA, gB](const BStr& x) -> std::optional<BStr> {
    if (x.empty()) return BStr{};
    BStr y = x.drop_last(1);
    if (x.back() == '0') {
      auto v = fA.map(y);
      if (!v) return std::nullopt;
      return *v + '0';
    }
    auto v = gB.map(y);
    if (!v) return std::nullopt;
    return shift(*v + '0', -1);
  };
  if (fA.witness && gB.witness) {
    auto wA = *fA.witness, wB = *gB.witness;
    h.witness = [wA, wB](const BStr& z) -> std::optional<BStr> {
      if (!z.empty() && z.back() == '0') {
        auto w = wA(z.drop_last(1));
        if (!w) return std::nullopt;
        return *w + '0';
      }
      BStr y = shift(z, 1).drop_last(1);
      auto w = wB(y);
      if (!w) return std::nullopt;
      return *w + '1';
    };
  }
  return h;
}

// Semistrong ranker for the complement of A, from a semistrong ranker h of
// A and a ranker f of X = Sigma* (+) A that is correct on members of X.
inline SemistrongRanker complement_semistrong_via_join(SemistrongRanker hA, Ranker fX) {
  return {[hA = std::move(hA), fX = std::move(fX)](const BStr& x) -> RankOrOut {
    if (std::holds_alternative<Rank>(hA(x))) return NotInSet{};
    BStr probe = shift(x, 1) + '0';
    auto v = rank_value(fX, probe);
    if (!v)
      throw contract_violation("join ranker reported NotInSet at member " + probe.str());
    return detail::nonneg(2 * rank_sigma_star(x) + 1 - *v, "complement via join", x);
  }};
}

// ------------------------------------------------------ symmetric difference

// Ranker for (A - B1) u B2 given a ranker f of A, B1 a subset of A and B2
// disjoint from A. A weak f is only as good as its values at members of
// B2, which are nonmembers of A.
inline Ranker symdiff_rank(const Ranker& f, StrongRanker rB1, StrongRanker rB2) {
  auto adjust = [=](const BStr& x, const Rank& base) {
    return detail::nonneg(base + rB2(x) - rB1(x), "symmetric difference", x);
  };
  switch (kind_of(f)) {
    case RankerKind::strong: {
      auto s = std::get<StrongRanker>(f);
      return StrongRanker{[s, adjust](const BStr& x) { return adjust(x, s(x)); }};
    }
    case RankerKind::weak: {
      auto w = std::get<WeakRanker>(f);
      return WeakRanker{[w, adjust](const BStr& x) { return adjust(x, w(x)); }};
    }
    case RankerKind::semistrong: break;
  }
  throw configuration_error("symdiff_rank: semistrong input ranker is not supported");
}

// ------------------------------------------------------------ subtraction

// Compression for A - B1 when B1 is infinite: f = h o g, where g fixes
// everything outside B1 u B2, sends c_i (the i-th member of B2) to
// b_{(i+1)/2} for odd i and to c_{i/2} for even i.
inline Compression subtract_compress(Compression h, Predicate b1, Predicate b2,
                                     std::size_t scan_len = 24) {
  auto s1 = std::make_shared<MemberScanner>(b1, scan_len);
  auto s2 = std::make_shared<MemberScanner>(b2, scan_len);
  auto nth = [](MemberScanner& s, const Integer& i, const char* which) {
    auto v = s.nth(i);
    if (!v)
      throw resource_error(std::string("subtract_compress: ") + which + " has fewer than " +
                           i.str() + " members within the scan limit");
    return *v;
  };
  auto g = [=](const BStr& x) -> BStr {
    bool in1 = b1(x), in2 = b2(x);
    if (in1 && in2)
      throw contract_violation("subtract_compress: " + x.str() + " is in both B1 and B2");
    if (in1) return BStr{};
    if (!in2) return x;
    Integer i = s2->count_le(x);
    if (i % 2 == 1) return nth(*s1, (i + 1) / 2, "B1");
    return nth(*s2, i / 2, "B2");
  };
  Compression f;
  f.map = [h, g](const BStr& x) { return h.map(g(x)); };
  if (h.witness) {
    auto wh = *h.witness;
    f.witness = [=](const BStr& z) -> std::optional<BStr> {
      auto w = wh(z);
      if (!w) return std::nullopt;
      bool in1 = b1(*w), in2 = b2(*w);
      if (in1 && in2)
        throw contract_violation("subtract_compress: " + w->str() + " is in both B1 and B2");
      if (in1) return nth(*s2, 2 * Integer(s1->count_le(*w)) - 1, "B2");
      if (in2) return nth(*s2, 2 * Integer(s2->count_le(*w)), "B2");
      return w;
    };
  }
  return f;
}

// Compression for A - B1 when B1 is finite: the image of A - B1 under h is
// Sigma* minus h(B1), and a cofinite set compresses by closing the gaps.
inline Compression subtract_finite_compress(Compression h, const std::vector<BStr>& b1) {
  std::vector<BStr> holes;
  for (const auto& b : b1) {
    auto v = h.map(b);
    if (!v) throw contract_violation("subtract_finite_compress: h undefined on " + b.str());
    holes.push_back(*v);
  }
  std::sort(holes.begin(), holes.end());
  holes.erase(std::unique(holes.begin(), holes.end()), holes.end());
  auto shared = std::make_shared<const std::vector<BStr>>(holes);
  Compression f;
  f.map = [h, shared](const BStr& x) -> std::optional<BStr> {
    auto y = h.map(x);
    if (!y) return std::nullopt;
    long long below = std::lower_bound(shared->begin(), shared->end(), *y) - shared->begin();
    return shift(*y, -below);
  };
  if (h.witness) {
    auto wh = *h.witness;
    f.witness = [wh, shared](const BStr& z) -> std::optional<BStr> {
      // The index(z)-th string (0-based) of Sigma* with the holes removed.
      BStr y = z;
      for (const auto& hole : *shared) {
        if (hole <= y) advance(y);
        else break;
      }
      return wh(y);
    };
  }
  return f;
}

// ------------------------------------------------------------------ union

// Compression for A u B2 with B2 disjoint from A.
//  finite B2: members of B2 take the first |B2| targets (rank - 1, so the
//             first member lands on eps) and A is shifted past them.
//  infinite B2: A goes to 1 f(x); B2 goes to eps and to 0 shift(g(x), -1),
//             where g(x) is the rank_B2(x)-th string.
inline Compression union_compress(Compression f, const RankedSet& b2, bool finite,
                                  std::size_t scan_len = 24) {
  Predicate in2 = b2.member;
  auto scanner = std::make_shared<MemberScanner>(in2, scan_len);
  std::function<Rank(const BStr&)> r2;
  if (b2.ranker && kind_of(*b2.ranker) == RankerKind::strong) {
    r2 = std::get<StrongRanker>(*b2.ranker).fn;
  } else {
    r2 = [scanner](const BStr& x) { return Rank(scanner->count_le(x)); };
  }
  auto nth = [scanner](const Integer& n) {
    auto v = scanner->nth(n);
    if (!v)
      throw resource_error("union_compress: B2 has fewer than " + n.str() +
                           " members within the scan limit");
    return *v;
  };

  Compression out;
  if (finite) {
    if (!b2.finite_elements)
      throw configuration_error("union_compress: finite case needs the element list of '" +
                                b2.name + "'");
    std::vector<BStr> elems = *b2.finite_elements;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    const long long size = static_cast<long long>(elems.size());
    out.map = [f, in2, r2, size](const BStr& x) -> std::optional<BStr> {
      if (in2(x)) return shift(BStr{}, r2(x) - 1);
      auto v = f.map(x);
      if (!v) return std::nullopt;
      return shift(*v, size);
    };
    if (f.witness) {
      auto wA = *f.witness;
      out.witness = [wA, elems, size](const BStr& z) -> std::optional<BStr> {
        Integer i = index(z);
        if (i < size) return elems[static_cast<std::size_t>(i)];
        return wA(shift(z, -size));
      };
    }
    return out;
  }

  out.map = [f, in2, r2](const BStr& x) -> std::optional<BStr> {
    if (!in2(x)) {
      auto v = f.map(x);
      if (!v) return std::nullopt;
      return BStr("1") + *v;
    }
    Rank r = r2(x);
    BStr g = unrank(r < 1 ? Rank(1) : r);
    if (g.empty()) return BStr{};
    return BStr("0") + shift(g, -1);
  };
  if (f.witness) {
    auto wA = *f.witness;
    out.witness = [wA, nth](const BStr& z) -> std::optional<BStr> {
      if (z.empty()) return nth(1);
      if (z[0] == '1') return wA(z.substr(1));
      return nth(rank_sigma_star(shift(z.substr(1), 1)));
    };
  }
  return out;
}

// ------------------------------------------------------- padded witnesses

struct DecodedWitness {
  // The suffix found after x: the witness followed by the marker bit 1.
  BStr suffix;
  // The witness itself (suffix without its final bit).
  BStr payload;
  std::uint64_t queries = 0;
};

// For B = {x f(x) 1} u {x 0^(p(|x|)+1)} ranked strongly by rB: the suffix z
// of length p(|x|)+1 with rB(xz) = 2 rank_sigma_star(x), found by binary
// search over x Sigma^(p(|x|)+1).
inline DecodedWitness decode_witness(const StrongRanker& rB, const BStr& x,
                                     const Polynomial& p) {
  const std::size_t width = p(x.size()) + 1;
  const Rank target = 2 * rank_sigma_star(x);
  DecodedWitness out;
  Integer lo = 0, hi = pow2(width) - 1;
  auto at = [&](const Integer& v) {
    ++out.queries;
    return rB(x + from_numeral(v, width));
  };
  if (at(hi) < target)
    throw contract_violation("decode_witness: no string after " + x.str() +
                             " reaches rank " + target.str());
  while (lo < hi) {
    Integer mid = (lo + hi) / 2;
    if (at(mid) >= target) hi = mid;
    else lo = mid + 1;
  }
  BStr z = from_numeral(lo, width);
  if (rB(x + z) != target)
    throw contract_violation("decode_witness: rank " + target.str() + " is skipped after " +
                             x.str());
  out.suffix = z;
  out.payload = z.drop_last(1);
  return out;
}

// --------------------------------------------------------------- nongappy

struct NongappyStats {
  std::uint64_t oracle_queries = 0;
  std::uint64_t scanned = 0;
};

// Strong ranker for a nongappy set (every length window [n, p(n)] holds a
// member) from a semistrong one. For each x the greatest member y <= x is
// built bit by bit from prefix queries to an exhaustive-search oracle, and
// rank(x) = r(y).
class NongappyStrongifier {
 public:
  NongappyStrongifier(SemistrongRanker r, Polynomial p, Predicate member)
      : r_(std::move(r)), p_(std::move(p)), member_(std::move(member)) {}

  Rank operator()(const BStr& x) {
    auto y = greatest_member_le(x);
    if (!y) return 0;
    auto v = r_(*y);
    if (std::holds_alternative<NotInSet>(v))
      throw contract_violation("nongappy: ranker says " + y->str() + " is not a member");
    return std::get<Rank>(v);
  }

  // Bracketing pair found by search: the greatest member <= x (if any).
  // Throws if no member > x exists within the nongappy window.
  std::optional<BStr> bracket(const BStr& x) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(x);
      if (it != memo_.end()) return it->second;
    }
    const std::size_t limit = p_(x.size() + 1);
    BStr z = x;
    std::optional<Rank> rz;
    while (true) {
      advance(z);
      if (z.size() > limit)
        throw contract_violation("nongappy bound violated: no member above " + x.str() +
                                 " up to length " + std::to_string(limit));
      ++stats_.scanned;
      if (member_(z)) {
        rz = rank_of(z);
        break;
      }
    }
    std::optional<BStr> y;
    if (*rz > 1) {
      BStr c = x;
      while (true) {
        ++stats_.scanned;
        if (member_(c) && rank_of(c) + 1 == *rz) {
          y = c;
          break;
        }
        if (c.empty())
          throw contract_violation("nongappy: ranks below " + z.str() + " are inconsistent");
        c = shift(c, -1);
      }
    }
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(x, y);
    return y;
  }

  // <x, b> is in the oracle set iff some member is <= x and b is a prefix of
  // the greatest such member.
  bool oracle(const BStr& x, const BStr& b) {
    ++stats_.oracle_queries;
    auto y = bracket(x);
    return y && y->starts_with(b);
  }

  std::optional<BStr> greatest_member_le(const BStr& x) {
    if (!oracle(x, BStr{})) return std::nullopt;
    BStr b;
    while (true) {
      if (oracle(x, b + '0')) b.push_back('0');
      else if (oracle(x, b + '1')) b.push_back('1');
      else return b;
    }
  }

  const NongappyStats& stats() const { return stats_; }

 private:
  Rank rank_of(const BStr& y) {
    auto v = r_(y);
    if (std::holds_alternative<NotInSet>(v))
      throw contract_violation("nongappy: member " + y.str() + " has no rank");
    return std::get<Rank>(v);
  }

  SemistrongRanker r_;
  Polynomial p_;
  Predicate member_;
  std::mutex mutex_;
  std::map<BStr, std::optional<BStr>> memo_;
  NongappyStats stats_;
};

inline StrongRanker strongify_nongappy(SemistrongRanker r, Polynomial p, Predicate member) {
  auto impl = std::make_shared<NongappyStrongifier>(std::move(r), std::move(p),
                                                    std::move(member));
  return {[impl](const BStr& x) { return (*impl)(x); }};
}

}  // namespace rankkit
