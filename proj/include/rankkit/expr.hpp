#pragma once

// A small language for naming sets on the command line:
//
//   expr := NAME | FUNC '(' expr (',' expr)* ')' | 'finite' '{' STR (',' STR)* '}'
//   STR  := ('0'|'1')+ | 'eps'
//
// FUNC is one of union, intersect, join (two arguments) or complement (one).

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "rankkit/combinators.hpp"
#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"
#include "rankkit/sets.hpp"
#include "rankkit/setmodel.hpp"

namespace rankkit {

struct SetExpr {
  enum class Kind { name, union_, intersect, complement, join, finite };

  Kind kind = Kind::name;
  std::string name;
  std::vector<SetExpr> args;
  std::vector<BStr> elems;

  friend bool operator==(const SetExpr&, const SetExpr&) = default;

  // Canonical text; parse_expr(e.str()) == e.
  std::string str() const {
    switch (kind) {
      case Kind::name: return name;
      case Kind::finite: {
        std::string s = "finite{";
        for (std::size_t i = 0; i < elems.size(); ++i) s += (i ? "," : "") + elems[i].str();
        return s + "}";
      }
      default: {
        std::string s = func_name(kind) + "(";
        for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].str();
        return s + ")";
      }
    }
  }

  static std::string func_name(Kind k) {
    switch (k) {
      case Kind::union_: return "union";
      case Kind::intersect: return "intersect";
      case Kind::complement: return "complement";
      case Kind::join: return "join";
      default: return "";
    }
  }
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  SetExpr parse() {
    SetExpr e = expr();
    skip();
    if (i_ != s_.size()) throw parse_error("unexpected '" + std::string(1, s_[i_]) + "'", i_);
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  [[noreturn]] void fail(const std::string& what) {
    if (i_ >= s_.size()) throw parse_error(what + ", found end of input", i_);
    throw parse_error(what + ", found '" + std::string(1, s_[i_]) + "'", i_);
  }

  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  std::string word() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    if (start == i_) fail("expected a name");
    return s_.substr(start, i_ - start);
  }

  BStr bits() {
    skip();
    std::size_t start = i_;
    std::string w = word();
    if (w == "eps") return BStr{};
    if (w.find_first_not_of("01") != std::string::npos)
      throw parse_error("'" + w + "' is not a binary string", start);
    return BStr(w);
  }

  SetExpr expr() {
    skip();
    std::size_t start = i_;
    std::string w = word();
    SetExpr e;
    if (w == "finite") {
      e.kind = SetExpr::Kind::finite;
      expect('{');
      e.elems.push_back(bits());
      while (peek(',')) {
        ++i_;
        e.elems.push_back(bits());
      }
      expect('}');
      return e;
    }
    int arity = 0;
    if (w == "union") e.kind = SetExpr::Kind::union_, arity = 2;
    else if (w == "intersect") e.kind = SetExpr::Kind::intersect, arity = 2;
    else if (w == "join") e.kind = SetExpr::Kind::join, arity = 2;
    else if (w == "complement") e.kind = SetExpr::Kind::complement, arity = 1;
    if (arity == 0) {
      if (peek('(')) throw parse_error("unknown function '" + w + "'", start);
      if (!sets::known(w)) throw parse_error("unknown set '" + w + "'", start);
      e.name = w;
      return e;
    }
    expect('(');
    e.args.push_back(expr());
    while (peek(',')) {
      ++i_;
      e.args.push_back(expr());
    }
    expect(')');
    if (static_cast<int>(e.args.size()) != arity)
      throw parse_error(w + " takes " + std::to_string(arity) + " argument" +
                            (arity == 1 ? "" : "s") + ", got " + std::to_string(e.args.size()),
                        start);
    return e;
  }

  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline SetExpr parse_expr(const std::string& text) { return detail::ExprParser(text).parse(); }

struct EvaluatedSet {
  RankedSet set;
  std::size_t max_len = 10;
};

namespace detail {

inline std::optional<StrongRanker> strong_of(const RankedSet& s) {
  if (s.ranker && kind_of(*s.ranker) == RankerKind::strong) return std::get<StrongRanker>(*s.ranker);
  return std::nullopt;
}

// rank of A ∪ F or A ∩ F for a strongly ranked A and a finite F.
inline StrongRanker finite_mix(StrongRanker ra, Predicate in_a, std::vector<BStr> f, bool unite) {
  return {[ra, in_a, f, unite](const BStr& x) -> Rank {
    Rank r = unite ? ra(x) : Rank(0);
    for (const auto& y : f)
      if (y <= x && in_a(y) != unite) r += 1;
    return r;
  }};
}

}  // namespace detail

// Builds the set an expression denotes. Rankers are attached where a
// closed form is available; otherwise ranking falls back to brute force.
inline EvaluatedSet evaluate(const SetExpr& e) {
  using K = SetExpr::Kind;
  switch (e.kind) {
    case K::name: {
      auto entry = sets::lookup(e.name);
      return {std::move(entry.set), entry.max_len};
    }
    case K::finite: return {sets::finite(e.elems), 10};
    case K::complement: {
      EvaluatedSet a = evaluate(e.args[0]);
      RankedSet out{"complement(" + a.set.name + ")",
                    [m = a.set.member](const BStr& x) { return !m(x); }, std::nullopt,
                    std::nullopt, std::nullopt};
      if (auto r = detail::strong_of(a.set)) out.ranker = Ranker{complement_strong(*r)};
      return {std::move(out), a.max_len};
    }
    case K::join: {
      EvaluatedSet a = evaluate(e.args[0]), b = evaluate(e.args[1]);
      RankedSet out{"join(" + a.set.name + "," + b.set.name + ")",
                    join_member(a.set.member, b.set.member), std::nullopt, std::nullopt,
                    std::nullopt};
      auto ra = detail::strong_of(a.set), rb = detail::strong_of(b.set);
      if (ra && rb) out.ranker = Ranker{join_strong(*ra, *rb)};
      if (a.set.compressor && b.set.compressor)
        out.compressor = join_compress(*a.set.compressor, *b.set.compressor);
      return {std::move(out), std::min(a.max_len, b.max_len) + 1};
    }
    case K::union_:
    case K::intersect: {
      const bool unite = e.kind == K::union_;
      EvaluatedSet a = evaluate(e.args[0]), b = evaluate(e.args[1]);
      Predicate ma = a.set.member, mb = b.set.member;
      RankedSet out{std::string(unite ? "union(" : "intersect(") + a.set.name + "," +
                        b.set.name + ")",
                    unite ? Predicate([ma, mb](const BStr& x) { return ma(x) || mb(x); })
                          : Predicate([ma, mb](const BStr& x) { return ma(x) && mb(x); }),
                    std::nullopt, std::nullopt, std::nullopt};
      for (int side = 0; side < 2 && !out.ranker; ++side) {
        const EvaluatedSet& fin = side ? a : b;
        const EvaluatedSet& other = side ? b : a;
        auto r = detail::strong_of(other.set);
        if (fin.set.finite_elements && r)
          out.ranker =
              Ranker{detail::finite_mix(*r, other.set.member, *fin.set.finite_elements, unite)};
      }
      return {std::move(out), std::min(a.max_len, b.max_len)};
    }
  }
  throw contract_violation("unhandled expression kind");
}

inline EvaluatedSet evaluate(const std::string& text) { return evaluate(parse_expr(text)); }

}  // namespace rankkit
