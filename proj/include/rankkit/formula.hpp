#pragma once

// Boolean formulas and their bit encoding.
//
//   encoding := k (8 bits, MSB first) token*
//   token    := 00 index(8 bits) | 01 (AND) | 10 (OR) | 11 (NOT)
//
// Tokens are in postfix order. A string is a valid encoding when the tokens
// leave exactly one value on the stack with no bits left over, every index
// is below k, 1 <= k <= 255, and k is at most the length of the string.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"

namespace rankkit {

enum class Op : std::uint8_t { var, land, lor, lnot };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  unsigned index = 0;
  NodePtr a, b;
};

inline NodePtr var(unsigned i) { return std::make_shared<const Node>(Node{Op::var, i, {}, {}}); }
inline NodePtr land(NodePtr a, NodePtr b) {
  return std::make_shared<const Node>(Node{Op::land, 0, std::move(a), std::move(b)});
}
inline NodePtr lor(NodePtr a, NodePtr b) {
  return std::make_shared<const Node>(Node{Op::lor, 0, std::move(a), std::move(b)});
}
inline NodePtr lnot(NodePtr a) {
  return std::make_shared<const Node>(Node{Op::lnot, 0, std::move(a), {}});
}

inline bool same_tree(const NodePtr& x, const NodePtr& y) {
  if (x == y) return true;
  if (!x || !y || x->op != y->op) return false;
  switch (x->op) {
    case Op::var: return x->index == y->index;
    case Op::lnot: return same_tree(x->a, y->a);
    default: return same_tree(x->a, y->a) && same_tree(x->b, y->b);
  }
}

// A VAR node has depth 0.
inline unsigned depth(const NodePtr& n) {
  switch (n->op) {
    case Op::var: return 0;
    case Op::lnot: return 1 + depth(n->a);
    default: return 1 + std::max(depth(n->a), depth(n->b));
  }
}

inline void collect_vars(const NodePtr& n, std::set<unsigned>& out) {
  if (n->op == Op::var) {
    out.insert(n->index);
    return;
  }
  collect_vars(n->a, out);
  if (n->b) collect_vars(n->b, out);
}

// value(i) gives the truth value of variable i.
template <class Value>
bool evaluate(const NodePtr& n, const Value& value) {
  switch (n->op) {
    case Op::var: return value(n->index);
    case Op::lnot: return !evaluate(n->a, value);
    case Op::land: return evaluate(n->a, value) && evaluate(n->b, value);
    case Op::lor: return evaluate(n->a, value) || evaluate(n->b, value);
  }
  return false;
}

inline std::string to_string(const NodePtr& n) {
  switch (n->op) {
    case Op::var: return "x" + std::to_string(n->index);
    case Op::lnot: return "!" + to_string(n->a);
    case Op::land: return "(" + to_string(n->a) + " & " + to_string(n->b) + ")";
    case Op::lor: return "(" + to_string(n->a) + " | " + to_string(n->b) + ")";
  }
  return "?";
}

struct FormulaAst {
  unsigned k = 1;
  NodePtr body;

  friend bool operator==(const FormulaAst& x, const FormulaAst& y) {
    return x.k == y.k && same_tree(x.body, y.body);
  }
  std::string str() const { return "k=" + std::to_string(k) + " " + to_string(body); }
};

// Bit length of the token stream for a tree.
inline std::size_t body_length(const NodePtr& n) {
  switch (n->op) {
    case Op::var: return 10;
    case Op::lnot: return 2 + body_length(n->a);
    default: return 2 + body_length(n->a) + body_length(n->b);
  }
}

namespace detail {

inline void put_byte(std::string& s, unsigned v) {
  for (int i = 7; i >= 0; --i) s.push_back(((v >> i) & 1) ? '1' : '0');
}

inline void encode_tokens(const NodePtr& n, unsigned k, std::string& s) {
  switch (n->op) {
    case Op::var:
      if (n->index >= k)
        throw domain_error("encode_formula: variable index " + std::to_string(n->index) +
                           " not below k = " + std::to_string(k));
      s += "00";
      put_byte(s, n->index);
      return;
    case Op::lnot:
      encode_tokens(n->a, k, s);
      s += "11";
      return;
    case Op::land:
    case Op::lor:
      encode_tokens(n->a, k, s);
      encode_tokens(n->b, k, s);
      s += n->op == Op::land ? "01" : "10";
      return;
  }
}

}  // namespace detail

inline BStr encode_formula(const FormulaAst& f) {
  if (f.k < 1 || f.k > 255)
    throw domain_error("encode_formula: k = " + std::to_string(f.k) + " outside [1, 255]");
  if (!f.body) throw domain_error("encode_formula: empty body");
  std::string s;
  detail::put_byte(s, f.k);
  detail::encode_tokens(f.body, f.k, s);
  if (f.k > s.size())
    throw domain_error("encode_formula: k = " + std::to_string(f.k) +
                       " exceeds the encoding length " + std::to_string(s.size()));
  return BStr(std::move(s));
}

inline std::optional<FormulaAst> decode_formula(const BStr& alpha) {
  const std::string& s = alpha.bits();
  if (s.size() < 8) return std::nullopt;
  unsigned k = 0;
  for (int i = 0; i < 8; ++i) k = (k << 1) | (s[i] == '1');
  if (k == 0 || k > s.size()) return std::nullopt;
  std::vector<NodePtr> stack;
  std::size_t pos = 8;
  while (pos < s.size()) {
    if (pos + 2 > s.size()) return std::nullopt;
    char a = s[pos], b = s[pos + 1];
    pos += 2;
    if (a == '0' && b == '0') {
      if (pos + 8 > s.size()) return std::nullopt;
      unsigned idx = 0;
      for (int i = 0; i < 8; ++i) idx = (idx << 1) | (s[pos + i] == '1');
      pos += 8;
      if (idx >= k) return std::nullopt;
      stack.push_back(var(idx));
    } else if (a == '1' && b == '1') {
      if (stack.empty()) return std::nullopt;
      stack.back() = lnot(stack.back());
    } else {
      if (stack.size() < 2) return std::nullopt;
      NodePtr r = stack.back();
      stack.pop_back();
      NodePtr l = stack.back();
      stack.back() = (a == '0') ? land(l, r) : lor(l, r);
    }
  }
  if (stack.size() != 1) return std::nullopt;
  return FormulaAst{k, stack.back()};
}

// Variables actually occurring in the body, ascending.
inline std::vector<unsigned> used_vars(const FormulaAst& f) {
  std::set<unsigned> s;
  collect_vars(f.body, s);
  return {s.begin(), s.end()};
}

constexpr unsigned kCountSatMaxVars = 20;

// Satisfying assignments over all 2^k assignments, by truth table.
inline Rank count_sat(const FormulaAst& f) {
  if (f.k > kCountSatMaxVars)
    throw resource_error("count_sat: k = " + std::to_string(f.k) + " exceeds " +
                         std::to_string(kCountSatMaxVars));
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << f.k); ++a)
    count += evaluate(f.body, [&](unsigned i) { return ((a >> i) & 1) != 0; });
  return Rank(count);
}

// Assignments are read as bit strings a_0 a_1 ... a_{k-1} with a_i the value
// of variable i. Counts the satisfying ones that are numerically <= theta
// (|theta| = k). Only the occurring variables are enumerated, so k may be
// large.
inline Rank count_sat_le(const FormulaAst& f, const BStr& theta) {
  if (theta.size() != f.k) throw domain_error("count_sat_le: bound must have k bits");
  const auto used = used_vars(f);
  if (used.size() > 24) throw resource_error("count_sat_le: too many occurring variables");
  // Assignments whose first i bits agree with theta and whose bit i is 0
  // where theta has 1; then theta itself.
  auto count_with_fixed = [&](std::size_t fixed_len, bool flip_last) -> Rank {
    // Variables < fixed_len are fixed (the last one to 0 if flip_last).
    std::vector<unsigned> free_used;
    for (unsigned v : used)
      if (v >= fixed_len) free_used.push_back(v);
    std::size_t free_total = f.k - fixed_len;
    std::size_t free_unused = free_total - free_used.size();
    std::uint64_t sat = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free_used.size()); ++m) {
      bool v = evaluate(f.body, [&](unsigned i) {
        if (i < fixed_len) {
          if (flip_last && i + 1 == fixed_len) return false;
          return theta[i] == '1';
        }
        auto it = std::lower_bound(free_used.begin(), free_used.end(), i);
        return ((m >> (it - free_used.begin())) & 1) != 0;
      });
      sat += v;
    }
    return Rank(sat) << free_unused;
  };
  Rank total = 0;
  for (std::size_t i = 0; i < f.k; ++i)
    if (theta[i] == '1') total += count_with_fixed(i + 1, true);
  total += count_with_fixed(f.k, false);
  return total;
}

// Exact count for any k, enumerating only the occurring variables.
inline Rank count_sat_any(const FormulaAst& f) {
  return count_sat_le(f, BStr::ones(f.k));
}

// Is the padded string beta (|beta| >= k, bits after k all 0) a satisfying
// assignment? Strings with nonzero padding are rejected.
inline bool satisfied_by_padded(const FormulaAst& f, const BStr& beta) {
  if (beta.size() < f.k) return false;
  for (std::size_t i = f.k; i < beta.size(); ++i)
    if (beta[i] != '0') return false;
  return evaluate(f.body, [&](unsigned i) { return beta[i] == '1'; });
}

// Every formula over variables < k with depth <= max_depth, each once.
inline std::vector<NodePtr> enumerate_bodies(unsigned k, unsigned max_depth) {
  std::vector<NodePtr> upto, exact;
  for (unsigned i = 0; i < k; ++i) exact.push_back(var(i));
  upto = exact;
  for (unsigned d = 1; d <= max_depth; ++d) {
    // New trees have a child of depth exactly d-1.
    std::vector<NodePtr> shallower(upto.begin(), upto.end() - exact.size());
    std::vector<NodePtr> fresh;
    for (const auto& a : exact) fresh.push_back(lnot(a));
    for (auto mk : {&land, &lor}) {
      for (const auto& a : exact)
        for (const auto& b : upto) fresh.push_back(mk(a, b));
      for (const auto& a : shallower)
        for (const auto& b : exact) fresh.push_back(mk(a, b));
    }
    upto.insert(upto.end(), fresh.begin(), fresh.end());
    exact = std::move(fresh);
  }
  return upto;
}

inline std::vector<FormulaAst> enumerate_formulas(unsigned k, unsigned max_depth) {
  std::vector<FormulaAst> out;
  for (auto& b : enumerate_bodies(k, max_depth)) out.push_back({k, std::move(b)});
  return out;
}

// A formula whose depth is at most max_depth, drawn deterministically from rng.
inline NodePtr random_body(unsigned k, unsigned max_depth, std::mt19937_64& rng) {
  if (max_depth == 0 || rng() % 4 == 0) return var(static_cast<unsigned>(rng() % k));
  switch (rng() % 3) {
    case 0: return lnot(random_body(k, max_depth - 1, rng));
    case 1: return land(random_body(k, max_depth - 1, rng), random_body(k, max_depth - 1, rng));
    default: return lor(random_body(k, max_depth - 1, rng), random_body(k, max_depth - 1, rng));
  }
}

namespace detail {

// Infix syntax as printed by to_string: x<i>, !f, f & g, f | g and
// parentheses; ! binds tightest, then &, then |.
class FormulaParser {
 public:
  explicit FormulaParser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = disj();
    skip();
    if (i_ != s_.size()) throw parse_error("unexpected '" + std::string(1, s_[i_]) + "'", i_);
    return n;
  }

 private:
  void skip() {
    while (i_ < s_.size() && s_[i_] == ' ') ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) return ++i_, true;
    return false;
  }
  NodePtr disj() {
    NodePtr n = conj();
    while (eat('|')) n = lor(n, conj());
    return n;
  }
  NodePtr conj() {
    NodePtr n = unary();
    while (eat('&')) n = land(n, unary());
    return n;
  }
  NodePtr unary() {
    if (eat('!')) return lnot(unary());
    if (eat('(')) {
      NodePtr n = disj();
      if (!eat(')')) throw parse_error("expected ')'", i_);
      return n;
    }
    skip();
    if (i_ >= s_.size() || s_[i_] != 'x') throw parse_error("expected a variable", i_);
    std::size_t start = ++i_;
    while (i_ < s_.size() && s_[i_] >= '0' && s_[i_] <= '9') ++i_;
    if (start == i_ || i_ - start > 3) throw parse_error("bad variable index", start);
    unsigned v = static_cast<unsigned>(std::stoul(s_.substr(start, i_ - start)));
    if (v > 254) throw parse_error("variable index above 254", start);
    return var(v);
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace detail

// k defaults to one more than the largest variable index.
inline FormulaAst parse_formula(const std::string& text, std::optional<unsigned> k = {}) {
  NodePtr body = detail::FormulaParser(text).parse();
  std::set<unsigned> vars;
  collect_vars(body, vars);
  unsigned need = *vars.rbegin() + 1;
  if (k && *k < need) throw domain_error("formula uses x" + std::to_string(need - 1) +
                                         " but k = " + std::to_string(*k));
  return {k.value_or(need), body};
}

}  // namespace rankkit
