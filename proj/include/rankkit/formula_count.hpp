#pragma once

// Exact sums of satisfying-assignment counts over all formula encodings of
// a given length, and over those below a given encoding. These are the
// quantities a strong ranker of the satisfying-assignment languages needs.
//
// For an encoding alpha let S(alpha) be its number of satisfying
// assignments (0 when alpha is not a valid encoding). We compute
//   total_mass(n)          = sum of S over all alpha of length n
//   mass_below(alpha)      = sum of S over alpha' < alpha, |alpha'| = |alpha|
// without enumerating encodings: the sum over assignments is swapped with
// the sum over token streams, and token streams are counted by dynamic
// programming on their length, with leaves weighted by how many variable
// indices are true under the assignment.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rankkit/errors.hpp"
#include "rankkit/formula.hpp"
#include "rankkit/lexorder.hpp"

namespace rankkit {

namespace formula_count {

using u128 = unsigned __int128;

// Token streams longer than this could overflow the 128-bit counters.
constexpr std::size_t kMaxBodyBits = 120;

inline Integer to_integer(u128 v) {
  Integer out = static_cast<std::uint64_t>(v >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(v);
  return out;
}

inline Integer binomial(unsigned n, unsigned r) {
  if (r > n) return 0;
  Integer c = 1;
  for (unsigned i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;
  }
  return c;
}

// Counts for one leaf weighting: a VAR token has `t` indices whose variable
// is true and `f` whose variable is false.
struct Tables {
  std::size_t cap = 0;
  // Trees of exactly L bits evaluating to true / false.
  std::vector<u128> tr, fa;
  // ext[r][in][out]: streams of r bits taking a single stack value `in` to
  // `out` without reaching below it.
  std::vector<std::array<std::array<u128, 2>, 2>> ext;

  u128 tot(std::size_t L) const { return tr[L] + fa[L]; }
};

inline std::shared_ptr<const Tables> build_tables(std::uint64_t t, std::uint64_t f,
                                                  std::size_t cap) {
  auto tb = std::make_shared<Tables>();
  tb->cap = cap;
  tb->tr.assign(cap + 1, 0);
  tb->fa.assign(cap + 1, 0);
  if (cap >= 10) {
    tb->tr[10] = t;
    tb->fa[10] = f;
  }
  for (std::size_t L = 12; L <= cap; L += 2) {
    u128 tr = tb->fa[L - 2], fa = tb->tr[L - 2];
    for (std::size_t a = 10; a + 12 <= L; a += 2) {
      std::size_t b = L - 2 - a;
      u128 ta = tb->tr[a], fa_ = tb->fa[a], tb_ = tb->tr[b], fb = tb->fa[b];
      u128 both = (ta + fa_) * (tb_ + fb);
      tr += ta * tb_;              // and
      fa += both - ta * tb_;
      fa += fa_ * fb;              // or
      tr += both - fa_ * fb;
    }
    tb->tr[L] = tr;
    tb->fa[L] = fa;
  }
  tb->ext.assign(cap + 1, {});
  tb->ext[0][0][0] = tb->ext[0][1][1] = 1;
  for (std::size_t r = 2; r <= cap; r += 2) {
    for (int in = 0; in < 2; ++in) {
      for (int out = 0; out < 2; ++out) {
        u128 acc = tb->ext[r - 2][in][1 - out];  // NOT last
        for (std::size_t l = 10; l + 2 <= r; l += 2) {
          const auto& prev = tb->ext[r - l - 2][in];
          u128 tl = tb->tr[l], fl = tb->fa[l], all = tl + fl;
          u128 hit = out ? tl : fl;
          // AND: 0 stays 0 whatever the tree; 1 takes the tree's value.
          acc += prev[1] * hit + (out == 0 ? prev[0] * all : 0);
          // OR: 1 stays 1; 0 takes the tree's value.
          acc += prev[0] * hit + (out == 1 ? prev[1] * all : 0);
        }
        tb->ext[r][in][out] = acc;
      }
    }
  }
  return tb;
}

class Counter {
 public:
  static Counter& instance() {
    static Counter c;
    return c;
  }

  std::shared_ptr<const Tables> tables(unsigned k, unsigned tau, std::size_t need) {
    if (need > kMaxBodyBits)
      throw resource_error("formula counting limited to " + std::to_string(kMaxBodyBits) +
                           " body bits");
    std::lock_guard<std::mutex> lock(mutex_);
    auto& slot = tables_[{k, tau}];
    if (!slot || slot->cap < need) {
      std::size_t cap = std::max<std::size_t>(need, slot ? 2 * slot->cap : 64);
      cap = std::min(cap, kMaxBodyBits);
      slot = build_tables(tau, k - tau, cap);
    }
    return slot;
  }

  // Sum over all assignments to k variables of the number of trees of L
  // bits that the assignment satisfies.
  Integer tree_mass(unsigned k, std::size_t L) {
    if (L < 10 || L % 2) return 0;
    Integer s = 0;
    for (unsigned t = 0; t <= k; ++t) s += binomial(k, t) * to_integer(tables(k, t, L)->tr[L]);
    return s;
  }

  // Streams of exactly L bits reducing the stack `s` (bottom first, non
  // empty) to a single true value, leaves weighted by tau true indices.
  u128 reduce_to_true(unsigned k, unsigned tau, const std::vector<bool>& s, std::size_t L) {
    if (L % 2) return 0;
    auto tb = tables(k, tau, std::max<std::size_t>(L, 10));
    if (s.empty()) return tb->tr[L];
    ChainKey key{k, tau, s};
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = chains_.find(key);
      if (it != chains_.end() && it->second.size() > L) return it->second[L];
    }
    auto row = reduce_all(*tb, s);
    u128 v = row[L];
    std::lock_guard<std::mutex> lock(mutex_);
    chains_[key] = std::move(row);
    return v;
  }

 private:
  using ChainKey = std::tuple<unsigned, unsigned, std::vector<bool>>;

  // Counts for every length up to the table cap at once.
  static std::vector<u128> reduce_all(const Tables& tb, const std::vector<bool>& s) {
    const std::size_t L = tb.cap;
    // d[r][u]: the top part has been reduced to value u using r bits.
    std::vector<std::array<u128, 2>> d(L + 1);
    for (std::size_t r = 0; r <= L; r += 2)
      for (int u = 0; u < 2; ++u) d[r][u] = tb.ext[r][s.back()][u];
    for (std::size_t j = s.size() - 1; j-- > 0;) {
      std::vector<std::array<u128, 2>> nd(L + 1);
      const int below = s[j];
      for (std::size_t r1 = 0; r1 + 2 <= L; r1 += 2) {
        for (int u = 0; u < 2; ++u) {
          u128 c = d[r1][u];
          if (!c) continue;
          int vand = below & u, vor = below | u;
          for (std::size_t r2 = 0; r1 + 2 + r2 <= L; r2 += 2) {
            for (int out = 0; out < 2; ++out)
              nd[r1 + 2 + r2][out] += c * (tb.ext[r2][vand][out] + tb.ext[r2][vor][out]);
          }
        }
      }
      d = std::move(nd);
    }
    std::vector<u128> out(L + 1);
    for (std::size_t r = 0; r <= L; ++r) out[r] = d[r][1];
    return out;
  }

  std::mutex mutex_;
  std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const Tables>> tables_;
  std::map<ChainKey, std::vector<u128>> chains_;
};

// A variable index that no real formula uses: stands for "some index not
// otherwise mentioned".
constexpr unsigned kFresh = 1000;

// Sum over assignments to k variables of the number of suffix streams of L
// bits that reduce `stack` to true. `used` lists the distinct indices
// occurring in the stack (kFresh included when present).
inline Integer assignment_sum(unsigned k, const std::vector<NodePtr>& stack,
                              const std::vector<unsigned>& used, std::size_t L) {
  auto& ctr = Counter::instance();
  const unsigned u = static_cast<unsigned>(used.size());
  if (u > k) return 0;
  const unsigned rest = k - u;
  if (stack.empty()) return ctr.tree_mass(k, L);
  Integer total = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << u); ++m) {
    std::vector<bool> vals;
    for (const auto& n : stack) {
      vals.push_back(evaluate(n, [&](unsigned idx) {
        auto it = std::find(used.begin(), used.end(), idx);
        return ((m >> (it - used.begin())) & 1) != 0;
      }));
    }
    unsigned ones = static_cast<unsigned>(__builtin_popcountll(m));
    for (unsigned t = 0; t <= rest; ++t) {
      u128 c = ctr.reduce_to_true(k, ones + t, vals, L);
      if (c) total += binomial(rest, t) * to_integer(c);
    }
  }
  return total;
}

// Sum of S over all encodings of length n that start with `prefix`.
inline Integer prefix_mass(const std::string& prefix, std::size_t n) {
  if (n < 18 || prefix.size() > n) return 0;
  auto& ctr = Counter::instance();
  const std::size_t m = prefix.size();
  if (n - 8 > kMaxBodyBits)
    throw resource_error("formula counting limited to encodings of " +
                         std::to_string(kMaxBodyBits + 8) + " bits");
  if (m < 8) {
    unsigned v = 0;
    for (char c : prefix) v = (v << 1) | (c == '1');
    unsigned lo = v << (8 - m), hi = ((v + 1) << (8 - m)) - 1;
    Integer s = 0;
    for (unsigned k = std::max(lo, 1u); k <= hi && k <= n; ++k) s += ctr.tree_mass(k, n - 8);
    return s;
  }
  unsigned k = 0;
  for (std::size_t i = 0; i < 8; ++i) k = (k << 1) | (prefix[i] == '1');
  if (k == 0 || k > n) return 0;

  const std::string body = prefix.substr(8);
  const std::size_t after = n - m;  // bits still free after the prefix
  std::vector<NodePtr> stack;
  std::vector<unsigned> used;
  std::size_t pos = 0;
  while (pos + 2 <= body.size()) {
    char a = body[pos], b = body[pos + 1];
    if (a == '0' && b == '0') {
      if (pos + 10 > body.size()) break;
      unsigned idx = 0;
      for (std::size_t i = 0; i < 8; ++i) idx = (idx << 1) | (body[pos + 2 + i] == '1');
      if (idx >= k) return 0;
      stack.push_back(var(idx));
      if (std::find(used.begin(), used.end(), idx) == used.end()) used.push_back(idx);
      pos += 10;
    } else if (a == '1' && b == '1') {
      if (stack.empty()) return 0;
      stack.back() = lnot(stack.back());
      pos += 2;
    } else {
      if (stack.size() < 2) return 0;
      NodePtr r = stack.back();
      stack.pop_back();
      stack.back() = a == '0' ? land(stack.back(), r) : lor(stack.back(), r);
      pos += 2;
    }
  }
  const std::string partial = body.substr(pos);

  auto with_binary = [&](bool is_and, std::size_t L) -> Integer {
    if (stack.size() < 2) return 0;
    auto st = stack;
    NodePtr r = st.back();
    st.pop_back();
    st.back() = is_and ? land(st.back(), r) : lor(st.back(), r);
    return assignment_sum(k, st, used, L);
  };
  // A VAR token whose index lies in [lo, hi] and which is followed by L bits.
  auto with_var_range = [&](unsigned lo, unsigned hi, std::size_t L) -> Integer {
    hi = std::min(hi, k - 1);
    if (lo > hi) return 0;
    Integer s = 0;
    unsigned known = 0;
    for (unsigned idx : used) {
      if (idx < lo || idx > hi) continue;
      ++known;
      auto st = stack;
      st.push_back(var(idx));
      s += assignment_sum(k, st, used, L);
    }
    unsigned fresh = hi - lo + 1 - known;
    if (fresh > 0) {
      auto st = stack;
      st.push_back(var(kFresh));
      auto us = used;
      us.push_back(kFresh);
      s += Integer(fresh) * assignment_sum(k, st, us, L);
    }
    return s;
  };

  if (partial.empty()) return assignment_sum(k, stack, used, after);
  if (partial == "0") {
    Integer s = 0;
    if (after >= 1) s += with_binary(true, after - 1);
    if (after >= 9) s += with_var_range(0, 255, after - 9);
    return s;
  }
  if (partial == "1") {
    if (after < 1) return 0;
    Integer s = with_binary(false, after - 1);
    if (!stack.empty()) {
      auto st = stack;
      st.back() = lnot(st.back());
      s += assignment_sum(k, st, used, after - 1);
    }
    return s;
  }
  // "00" followed by j < 8 index bits.
  const std::size_t j = partial.size() - 2;
  const std::size_t missing = 8 - j;
  if (after < missing) return 0;
  unsigned v = 0;
  for (std::size_t i = 2; i < partial.size(); ++i) v = (v << 1) | (partial[i] == '1');
  unsigned lo = v << missing, hi = ((v + 1) << missing) - 1;
  return with_var_range(lo, hi, after - missing);
}

class MassCache {
 public:
  static MassCache& instance() {
    static MassCache c;
    return c;
  }
  Integer total(std::size_t n) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = totals_.find(n);
      if (it != totals_.end()) return it->second;
    }
    Integer v = prefix_mass("", n);
    std::lock_guard<std::mutex> lock(mutex_);
    totals_.emplace(n, v);
    return v;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, Integer> totals_;
};

}  // namespace formula_count

// Number of satisfying assignments of alpha, 0 if alpha is not a valid
// encoding.
inline Rank sat_mass(const BStr& alpha) {
  auto f = decode_formula(alpha);
  return f ? count_sat_any(*f) : Rank(0);
}

inline Integer total_mass(std::size_t n) { return formula_count::MassCache::instance().total(n); }

// Sum of sat_mass over encodings of the same length shortlex-below alpha.
inline Integer mass_below(const BStr& alpha) {
  static std::mutex mutex;
  static std::unordered_map<std::string, Integer> memo;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = memo.find(alpha.bits());
    if (it != memo.end()) return it->second;
  }
  Integer s = 0;
  std::string prefix;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == '1') s += formula_count::prefix_mass(prefix + '0', alpha.size());
    prefix.push_back(alpha[i]);
  }
  std::lock_guard<std::mutex> lock(mutex);
  if (memo.size() > (1u << 20)) memo.clear();
  memo.emplace(alpha.bits(), s);
  return s;
}

}  // namespace rankkit
