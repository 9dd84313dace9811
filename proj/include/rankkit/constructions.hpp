#pragma once

// Witness languages built from satisfying assignments, padded witnesses and
// forced "beacon" members, with their closed-form rankers and the decoders
// that read counts or memberships back out of ranks.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rankkit/combinators.hpp"
#include "rankkit/errors.hpp"
#include "rankkit/formula.hpp"
#include "rankkit/formula_count.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/polynomial.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit {

namespace detail {

inline bool all_zero(const BStr& x) {
  return x.bits().find('1') == std::string::npos;
}

inline Rank require_rank(const Ranker& r, const BStr& x, const char* what) {
  auto v = rank_value(r, x);
  if (!v) throw contract_violation(std::string(what) + ": ranker gave no rank for member " + x.str());
  return *v;
}

// x = alpha·mid·beta with |alpha| = |beta| = n and |mid| = mid_len.
struct Split {
  std::size_t n;
  BStr alpha, mid, beta;
};

inline std::optional<Split> split_padded(const BStr& z, std::size_t mid_len) {
  if (z.size() < mid_len || (z.size() - mid_len) % 2) return std::nullopt;
  std::size_t n = (z.size() - mid_len) / 2;
  return Split{n, z.prefix(n), z.substr(n, mid_len), z.substr(n + mid_len, n)};
}

}  // namespace detail

// ----------------------------------------------------------- beacon sets

// Strings alpha·mid·beta with |alpha| = |beta|, read off by length.
enum class BeaconPart { none, low_beacon, high_beacon, assignment };

struct BeaconParse {
  BeaconPart part = BeaconPart::none;
  BStr alpha, beta;
};

inline BeaconParse parse_beacon_string(const BStr& z) {
  auto s = detail::split_padded(z, 2);
  if (!s) return {};
  const std::string& m = s->mid.bits();
  if (m == "01") return {BeaconPart::assignment, s->alpha, s->beta};
  if (detail::all_zero(s->beta)) {
    if (m == "00") return {BeaconPart::low_beacon, s->alpha, s->beta};
    if (m == "11") return {BeaconPart::high_beacon, s->alpha, s->beta};
  }
  return {};
}

inline BStr low_beacon(const BStr& alpha) { return alpha + BStr("00") + BStr::zeros(alpha.size()); }
inline BStr high_beacon(const BStr& alpha) { return alpha + BStr("11") + BStr::zeros(alpha.size()); }

// alpha·01·beta with beta a zero-padded satisfying assignment of alpha.
inline bool is_sat_assignment_string(const BStr& alpha, const BStr& beta) {
  auto f = decode_formula(alpha);
  return f && satisfied_by_padded(*f, beta);
}

struct BeaconSets {
  RankedSet A, B;
  StrongRanker rIntersect, rUnion, rJoin;
};

namespace detail {

// Members of each kind in all length blocks shorter than |z|.
struct BeaconBlocks {
  Integer beacons, assignments_all, assignments_sat;
};

inline BeaconBlocks beacon_blocks_below(std::size_t len) {
  BeaconBlocks b{0, 0, 0};
  for (std::size_t n = 0; 2 * n + 2 < len; ++n) {
    Integer words = pow2(n);
    b.beacons += 2 * words;
    b.assignments_all += words * words;
    b.assignments_sat += total_mass(n);
  }
  return b;
}

inline Rank beacon_intersection_rank(const BStr& z) {
  Rank r = beacon_blocks_below(z.size()).beacons;
  auto s = split_padded(z, 2);
  if (!s) return r;
  r += 2 * numeral(s->alpha) + 1;
  if (s->mid.bits() == "11") r += 1;
  return r;
}

inline Rank beacon_union_rank(const BStr& z) {
  auto b = beacon_blocks_below(z.size());
  Rank r = b.beacons + b.assignments_all;
  auto s = split_padded(z, 2);
  if (!s) return r;
  const Integer words = pow2(s->n);
  r += numeral(s->alpha) * (words + 2) + 1;
  const std::string& m = s->mid.bits();
  if (m == "01") r += numeral(s->beta) + 1;
  if (m == "10" || m == "11") r += words;
  if (m == "11") r += 1;
  return r;
}

inline Rank beacon_a_rank(const BStr& z) {
  auto b = beacon_blocks_below(z.size());
  Rank r = b.beacons + b.assignments_sat;
  auto s = split_padded(z, 2);
  if (!s) return r;
  r += 2 * numeral(s->alpha) + mass_below(s->alpha) + 1;
  const std::string& m = s->mid.bits();
  if (m == "01") {
    if (auto f = decode_formula(s->alpha)) r += count_sat_le(*f, s->beta.prefix(f->k));
  } else if (m == "10" || m == "11") {
    r += sat_mass(s->alpha);
  }
  if (m == "11") r += 1;
  return r;
}

}  // namespace detail

inline BeaconSets beacon_sets() {
  auto in_a = [](const BStr& z) {
    auto p = parse_beacon_string(z);
    if (p.part == BeaconPart::none) return false;
    if (p.part != BeaconPart::assignment) return true;
    return is_sat_assignment_string(p.alpha, p.beta);
  };
  auto in_b = [](const BStr& z) {
    auto p = parse_beacon_string(z);
    if (p.part == BeaconPart::none) return false;
    if (p.part != BeaconPart::assignment) return true;
    return !is_sat_assignment_string(p.alpha, p.beta);
  };
  StrongRanker rA{detail::beacon_a_rank};
  StrongRanker rI{detail::beacon_intersection_rank};
  StrongRanker rU{detail::beacon_union_rank};
  // |A ∩ B| + |A ∪ B| = |A| + |B| below every string.
  StrongRanker rB{[rA, rU, rI](const BStr& z) -> Rank { return rU(z) + rI(z) - rA(z); }};
  StrongRanker rJoin{[rU, rI, in_b](const BStr& z) -> Rank {
    if (z.empty()) return 0;
    BStr y = z.drop_last(1);
    Rank r = rU(y) + rI(y);
    if (z.back() == '0' && in_b(y)) r -= 1;
    return r;
  }};
  BeaconSets out;
  out.A = RankedSet{"thm30_A", in_a, Ranker{rA}, std::nullopt, std::nullopt};
  out.B = RankedSet{"thm30_B", in_b, Ranker{rB}, std::nullopt, std::nullopt};
  out.rIntersect = rI;
  out.rUnion = rU;
  out.rJoin = rJoin;
  return out;
}

inline Predicate beacon_member() {
  return [](const BStr& z) {
    auto p = parse_beacon_string(z).part;
    return p == BeaconPart::low_beacon || p == BeaconPart::high_beacon;
  };
}

inline Predicate beacon_union_member() {
  return [](const BStr& z) { return parse_beacon_string(z).part != BeaconPart::none; };
}

namespace detail {

inline FormulaAst require_formula(const BStr& alpha, const char* what) {
  auto f = decode_formula(alpha);
  if (!f) throw domain_error(std::string(what) + ": not a valid formula encoding: " + alpha.str());
  return *f;
}

}  // namespace detail

// Satisfying-assignment count read from ranks of the two beacons of alpha
// in A.
inline Rank extract_sat_count_A(const Ranker& rA, const BStr& alpha) {
  detail::require_formula(alpha, "extract_sat_count_A");
  Rank hi = detail::require_rank(rA, high_beacon(alpha), "extract_sat_count_A");
  Rank lo = detail::require_rank(rA, low_beacon(alpha), "extract_sat_count_A");
  Rank s = hi - lo - 1;
  if (s < 0) throw contract_violation("extract_sat_count_A: negative count for " + alpha.str());
  return s;
}

// Same count read from B, where the block holds the non-satisfying strings.
inline Rank extract_sat_count_B(const Ranker& rB, const BStr& alpha) {
  detail::require_formula(alpha, "extract_sat_count_B");
  Rank hi = detail::require_rank(rB, high_beacon(alpha), "extract_sat_count_B");
  Rank lo = detail::require_rank(rB, low_beacon(alpha), "extract_sat_count_B");
  Rank s = 1 + pow2(alpha.size()) - (hi - lo);
  if (s < 0) throw contract_violation("extract_sat_count_B: negative count for " + alpha.str());
  return s;
}

// ------------------------------------------------------ paired sat sets

// A holds exactly one of x1y0, x1y1 for every x, y of equal length (x1y1
// when y is a padded satisfying assignment of x), plus every x0^{|x|+1}1.
// B is every string ending in 1.
struct PairedSatSets {
  RankedSet A, B;
  // Exact ranker of the intersection, from the formula-count tables.
  StrongRanker rIntersect;
};

struct PairedParse {
  bool ok = false;
  BStr x, y;
  char mid = '0', last = '0';
};

inline PairedParse parse_paired_string(const BStr& z) {
  if (z.size() < 2 || z.size() % 2) return {};
  std::size_t n = (z.size() - 2) / 2;
  return {true, z.prefix(n), z.substr(n + 1, n), z[n], z.back()};
}

inline BStr paired_anchor(const BStr& x) { return x + BStr::zeros(x.size() + 1) + '1'; }

namespace detail {

inline Rank paired_a_rank(const BStr& z) {
  Rank r = 0;
  for (std::size_t n = 0; 2 * n + 2 < z.size(); ++n) r += pow2(n) * (pow2(n) + 1);
  auto p = parse_paired_string(z);
  if (!p.ok) return r;
  const Integer words = pow2(p.x.size());
  r += numeral(p.x) * (words + 1);
  if (p.mid == '1') {
    r += 1 + numeral(p.y);  // anchor, then one string per smaller y
    if (p.last == '1') r += 1;
    else r += is_sat_assignment_string(p.x, p.y) ? 0 : 1;
  } else if (!(all_zero(p.y) && p.last == '0')) {
    r += 1;
  }
  return r;
}

inline Rank paired_intersection_rank(const BStr& z) {
  Rank r = 0;
  for (std::size_t n = 0; 2 * n + 2 < z.size(); ++n) r += total_mass(n) + pow2(n);
  auto p = parse_paired_string(z);
  if (!p.ok) return r;
  r += numeral(p.x) + mass_below(p.x);
  if (p.mid == '1') {
    r += 1;
    if (auto f = decode_formula(p.x)) {
      r += count_sat_le(*f, p.y.prefix(f->k));
      if (p.last == '0' && satisfied_by_padded(*f, p.y)) r -= 1;
    }
  } else if (!(all_zero(p.y) && p.last == '0')) {
    r += 1;
  }
  return r;
}

}  // namespace detail

// Strings ending in 1, ranked as floor(index(x) / 2).
inline StrongRanker ends_in_one_ranker() {
  return {[](const BStr& x) -> Rank { return index(x) / 2; }};
}

inline PairedSatSets paired_sat_sets() {
  auto in_a = [](const BStr& z) {
    auto p = parse_paired_string(z);
    if (!p.ok) return false;
    if (p.mid == '0') return detail::all_zero(p.y) && p.last == '1';
    bool sat = is_sat_assignment_string(p.x, p.y);
    return p.last == '1' ? sat : !sat;
  };
  auto in_b = [](const BStr& z) { return !z.empty() && z.back() == '1'; };
  PairedSatSets out;
  out.A = RankedSet{"thm11_A", in_a, Ranker{StrongRanker{detail::paired_a_rank}}, std::nullopt,
                    std::nullopt};
  out.B = RankedSet{"thm11_B", in_b, Ranker{ends_in_one_ranker()}, std::nullopt, std::nullopt};
  out.rIntersect = StrongRanker{detail::paired_intersection_rank};
  return out;
}

// Satisfying-assignment count from a ranker of A ∩ B, using the anchors of
// x and of its successor.
inline Rank paired_extract(const Ranker& rAB, const BStr& x) {
  detail::require_formula(x, "paired_extract");
  Rank hi = detail::require_rank(rAB, paired_anchor(shift(x, 1)), "paired_extract");
  Rank lo = detail::require_rank(rAB, paired_anchor(x), "paired_extract");
  Rank s = hi - lo - 1;
  if (s < 0) throw contract_violation("paired_extract: negative count for " + x.str());
  return s;
}

// ---------------------------------------------------- padded witnesses

// A toy length-exact witness function: |fn(x)| = p(|x|).
struct ToyWitness {
  std::string name;
  std::function<BStr(const BStr&)> fn;
};

// x·0^{p(|x|)+1} and x·f(x)·1, ranked 2R(x)-1 and 2R(x) (R = rank in Σ*).
inline RankedSet padded_witness_language(ToyWitness f, Polynomial p) {
  // Returns the x that owns the length block of z, if any.
  auto owner = [p](const BStr& z) -> std::optional<std::size_t> {
    for (std::size_t n = 0; n + 1 <= z.size(); ++n) {
      std::uint64_t len = n + p(n) + 1;
      if (len == z.size()) return n;
      if (len > z.size()) break;
    }
    return std::nullopt;
  };
  auto classify = [f, p, owner](const BStr& z) -> int {
    auto n = owner(z);
    if (!n) return 0;
    BStr x = z.prefix(*n);
    BStr tail = z.substr(*n, z.size() - *n);
    if (detail::all_zero(tail)) return 1;
    BStr w = f.fn(x);
    if (w.size() != p(*n))
      throw domain_error("witness function " + f.name + " gives length " +
                         std::to_string(w.size()) + " at " + x.str() + ", expected " +
                         std::to_string(p(*n)));
    return tail == w + '1' ? 2 : 0;
  };
  auto member = [classify](const BStr& z) { return classify(z) != 0; };
  SemistrongRanker r{[classify, owner](const BStr& z) -> RankOrOut {
    int c = classify(z);
    if (c == 0) return NotInSet{};
    Rank base = 2 * rank_sigma_star(z.prefix(*owner(z)));
    return c == 1 ? Rank(base - 1) : base;
  }};
  return RankedSet{"thm16_B:" + f.name, member, Ranker{r}, std::nullopt, std::nullopt};
}

// Witness functions of length |x| + 1.
inline std::vector<ToyWitness> toy_witnesses() {
  return {
      {"mirror",
       [](const BStr& x) {
         std::string s(x.bits().rbegin(), x.bits().rend());
         return BStr(s + "0");
       }},
      {"complement",
       [](const BStr& x) {
         std::string s = x.bits();
         for (char& c : s) c = c == '0' ? '1' : '0';
         return BStr(s + "1");
       }},
      {"parity",
       [](const BStr& x) {
         auto ones = std::count(x.bits().begin(), x.bits().end(), '1');
         return BStr::zeros(x.size()) + (ones % 2 ? '1' : '0');
       }},
  };
}

// ------------------------------------------- union without its parts

// A = C0 ∪ Σ*1, B = C1 ∪ Σ*0, A' = C00 ∪ Σ*1, B' = C10 ∪ Σ*1.
struct GreenSets {
  RankedSet A, B, A_prime, B_prime;
  StrongRanker rUnion, rIntersect;
};

inline GreenSets green_witnesses(Predicate c) {
  auto last_is = [](const BStr& z, char b) { return !z.empty() && z.back() == b; };
  auto ends_with = [](const BStr& z, const char* tail) {
    BStr t(tail);
    return z.size() >= t.size() && z.substr(z.size() - t.size(), t.size()) == t;
  };
  auto strip = [](const BStr& z, std::size_t n) { return z.prefix(z.size() - n); };
  GreenSets g;
  g.A = {"green_A",
         [=](const BStr& z) { return last_is(z, '1') || (last_is(z, '0') && c(strip(z, 1))); },
         std::nullopt, std::nullopt, std::nullopt};
  g.B = {"green_B",
         [=](const BStr& z) { return last_is(z, '0') || (last_is(z, '1') && c(strip(z, 1))); },
         std::nullopt, std::nullopt, std::nullopt};
  g.A_prime = {"green_A_prime",
               [=](const BStr& z) {
                 return last_is(z, '1') || (ends_with(z, "00") && c(strip(z, 2)));
               },
               std::nullopt, std::nullopt, std::nullopt};
  g.B_prime = {"green_B_prime",
               [=](const BStr& z) {
                 return last_is(z, '1') || (ends_with(z, "10") && c(strip(z, 2)));
               },
               std::nullopt, std::nullopt, std::nullopt};
  // Every nonempty string ends in 0 or 1, so the union misses only ε.
  g.rUnion = StrongRanker{[](const BStr& x) -> Rank { return index(x); }};
  g.rIntersect = ends_in_one_ranker();
  return g;
}

// ----------------------------------------------- one-per-block patterns

// Sets holding exactly one of x·s over the suffixes s of a block (arity 2:
// one bit, arity 4: two bits). choose(x) picks the suffix numeral.
inline std::size_t paired_suffix_bits(unsigned arity) {
  if (arity == 2) return 1;
  if (arity == 4) return 2;
  throw domain_error("paired pattern arity must be 2 or 4, got " + std::to_string(arity));
}

inline Predicate paired_member(unsigned arity, std::function<unsigned(const BStr&)> choose) {
  std::size_t bits = paired_suffix_bits(arity);
  return [bits, arity, choose = std::move(choose)](const BStr& z) {
    if (z.size() < bits) return false;
    BStr x = z.prefix(z.size() - bits);
    return numeral(z.substr(x.size(), bits)) == Integer(choose(x) % arity);
  };
}

// x·s goes to rank_sigma_star(x); shorter strings to 0.
inline WeakRanker paired_weak_ranker(unsigned arity) {
  std::size_t bits = paired_suffix_bits(arity);
  return {[bits](const BStr& z) -> Rank {
    if (z.size() < bits) return 0;
    return rank_sigma_star(z.prefix(z.size() - bits));
  }};
}

// ------------------------------------------------------ decoding probes

// {x000} ∪ {x001 : x ∈ B} ∪ {x010} ∪ {x100 : x ∈ B}.
inline RankedSet cpo_set(Predicate b) {
  auto member = [b = std::move(b)](const BStr& z) {
    if (z.size() < 3) return false;
    BStr x = z.prefix(z.size() - 3);
    const std::string t = z.substr(x.size(), 3).bits();
    if (t == "000" || t == "010") return true;
    if (t == "001" || t == "100") return b(x);
    return false;
  };
  return RankedSet{"cpo", member, std::nullopt, std::nullopt, std::nullopt};
}

inline bool cpo_decode(const Ranker& rA, const BStr& x) {
  Rank hi = detail::require_rank(rA, x + BStr("010"), "cpo_decode");
  Rank lo = detail::require_rank(rA, x + BStr("000"), "cpo_decode");
  return hi - lo > 1;
}

// Σ* ⊕ A'.
inline RankedSet tyef_set(Predicate a_prime) {
  return RankedSet{"tyef", join_member([](const BStr&) { return true; }, std::move(a_prime)),
                   std::nullopt, std::nullopt, std::nullopt};
}

inline bool tyef_detect(const Ranker& rB, const BStr& x) {
  Rank here = detail::require_rank(rB, x + '0', "tyef_detect");
  Rank next = detail::require_rank(rB, shift(x, 1) + '0', "tyef_detect");
  return here + 2 == next;
}

}  // namespace rankkit
