#pragma once

// Named sets with closed-form rankers, and the registry the expression
// language binds names against.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rankkit/combinators.hpp"
#include "rankkit/constructions.hpp"
#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/polynomial.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit::sets {

inline RankedSet sigma_star() {
  return {"sigma_star", sigma_star_member(), Ranker{sigma_star_ranker()}, identity_compression(),
          std::nullopt};
}

inline RankedSet empty() {
  return {"empty", [](const BStr&) { return false; }, Ranker{zero_ranker()}, std::nullopt,
          std::vector<BStr>{}};
}

// Σ*1
inline RankedSet ends_in_one() {
  return {"ends_in_1", [](const BStr& x) { return !x.empty() && x.back() == '1'; },
          Ranker{ends_in_one_ranker()}, std::nullopt, std::nullopt};
}

inline RankedSet even_length() {
  StrongRanker r{[](const BStr& x) -> Rank {
    // Strings of even length below |x|: 1 + 4 + ... + 4^(m-1) = (4^m - 1) / 3.
    Rank below = (pow2(2 * ((x.size() + 1) / 2)) - 1) / 3;
    if (x.size() % 2 == 0) below += numeral(x) + 1;
    return below;
  }};
  return {"even_length", [](const BStr& x) { return x.size() % 2 == 0; }, Ranker{r}, std::nullopt,
          std::nullopt};
}

// {0^n : n >= 0}
inline RankedSet zeros() {
  StrongRanker r{[](const BStr& x) -> Rank { return Rank(x.size()) + 1; }};
  return {"zeros", [](const BStr& x) { return detail::all_zero(x); }, Ranker{r}, std::nullopt,
          std::nullopt};
}

// The low and high beacons of every string.
inline RankedSet beacons() {
  return {"beacons", beacon_member(), Ranker{StrongRanker{detail::beacon_intersection_rank}},
          std::nullopt, std::nullopt};
}

inline RankedSet finite(std::vector<BStr> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::string name = "finite{";
  for (std::size_t i = 0; i < elems.size(); ++i) name += (i ? "," : "") + elems[i].str();
  name += "}";
  auto shared = std::make_shared<const std::vector<BStr>>(elems);
  Predicate member = [shared](const BStr& x) {
    return std::binary_search(shared->begin(), shared->end(), x);
  };
  StrongRanker r{[shared](const BStr& x) -> Rank {
    return Rank(std::upper_bound(shared->begin(), shared->end(), x) - shared->begin());
  }};
  return {name, member, Ranker{r}, std::nullopt, std::move(elems)};
}

// Attaches the compressor x -> unrank(rank(x)) when a ranker is present.
inline RankedSet with_compressor(RankedSet s, std::size_t scan_len = 24) {
  if (s.ranker && !s.compressor) s.compressor = rank_to_compression(*s.ranker, s.member, scan_len);
  return s;
}

struct Entry {
  RankedSet set;
  // Default verification bound; padding-heavy sets use less.
  std::size_t max_len = 10;
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{
      "sigma_star", "empty",         "ends_in_1",     "even_length", "zeros",
      "beacons",    "thm30_A",       "thm30_B",       "thm11_A",     "thm11_B",
      "thm16_B",    "green_A",       "green_B",       "green_A_prime", "green_B_prime"};
  return n;
}

inline bool known(const std::string& name) {
  const auto& n = names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

// Throws configuration_error for unknown names.
inline Entry lookup(const std::string& name) {
  if (name == "sigma_star") return {sigma_star(), 10};
  if (name == "empty") return {empty(), 10};
  if (name == "ends_in_1") return {ends_in_one(), 10};
  if (name == "even_length") return {even_length(), 10};
  if (name == "zeros") return {zeros(), 10};
  if (name == "beacons") return {beacons(), 10};
  if (name == "thm30_A") return {beacon_sets().A, 10};
  if (name == "thm30_B") return {beacon_sets().B, 10};
  if (name == "thm11_A") return {paired_sat_sets().A, 10};
  if (name == "thm11_B") return {paired_sat_sets().B, 10};
  if (name == "thm16_B") return {padded_witness_language(toy_witnesses().front(), {1, 1}), 9};
  if (name.rfind("green_", 0) == 0) {
    auto g = green_witnesses(even_length().member);
    if (name == "green_A") return {g.A, 8};
    if (name == "green_B") return {g.B, 8};
    if (name == "green_A_prime") return {g.A_prime, 8};
    if (name == "green_B_prime") return {g.B_prime, 8};
  }
  throw configuration_error("unknown set '" + name + "'");
}

}  // namespace rankkit::sets
