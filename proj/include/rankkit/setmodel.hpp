#pragma once

// Sets with attached rankers and compressors, the step-budgeted model of
// partial functions, and the brute-force oracle every other module is
// checked against.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rankkit/errors.hpp"
#include "rankkit/lexorder.hpp"

namespace rankkit {

using Predicate = std::function<bool(const BStr&)>;

// ---------------------------------------------------------------- rankers

struct NotInSet {
  friend bool operator==(NotInSet, NotInSet) { return true; }
};

using RankOrOut = std::variant<Rank, NotInSet>;
using RankFn = std::function<Rank(const BStr&)>;
using RankOrOutFn = std::function<RankOrOut(const BStr&)>;

// Correct rank on every string.
struct StrongRanker {
  RankFn fn;
  Rank operator()(const BStr& x) const { return fn(x); }
};

// Correct rank on members, NotInSet on everything else.
struct SemistrongRanker {
  RankOrOutFn fn;
  RankOrOut operator()(const BStr& x) const { return fn(x); }
};

// Correct rank on members; any value elsewhere.
struct WeakRanker {
  RankFn fn;
  Rank operator()(const BStr& x) const { return fn(x); }
};

using Ranker = std::variant<StrongRanker, SemistrongRanker, WeakRanker>;

enum class RankerKind { strong, semistrong, weak };

inline RankerKind kind_of(const Ranker& r) { return static_cast<RankerKind>(r.index()); }

inline const char* to_string(RankerKind k) {
  switch (k) {
    case RankerKind::strong: return "strong";
    case RankerKind::semistrong: return "semistrong";
    case RankerKind::weak: return "weak";
  }
  return "?";
}

inline RankerKind parse_ranker_kind(const std::string& s) {
  if (s == "strong") return RankerKind::strong;
  if (s == "semistrong") return RankerKind::semistrong;
  if (s == "weak") return RankerKind::weak;
  throw configuration_error("unknown ranker kind '" + s + "'");
}

// The rank a ranker reports at x, or nullopt when it says NotInSet.
inline std::optional<Rank> rank_value(const Ranker& r, const BStr& x) {
  return std::visit(
      [&](const auto& k) -> std::optional<Rank> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SemistrongRanker>) {
          RankOrOut v = k(x);
          if (std::holds_alternative<NotInSet>(v)) return std::nullopt;
          return std::get<Rank>(v);
        } else {
          return k(x);
        }
      },
      r);
}

inline std::string to_string(const RankOrOut& v) {
  if (std::holds_alternative<NotInSet>(v)) return "out";
  return std::get<Rank>(v).str();
}

// Treats a strong ranker as semistrong by consulting membership.
inline SemistrongRanker as_semistrong(StrongRanker r, Predicate member) {
  return {[r = std::move(r), member = std::move(member)](const BStr& x) -> RankOrOut {
    if (!member(x)) return NotInSet{};
    return r(x);
  }};
}

inline WeakRanker as_weak(const Ranker& r) {
  return {[r](const BStr& x) -> Rank {
    auto v = rank_value(r, x);
    return v ? *v : Rank(0);
  }};
}

// ----------------------------------------------------------- compressions

// nullopt means "undefined at this input".
using PartialMap = std::function<std::optional<BStr>(const BStr&)>;

struct Compression {
  PartialMap map;
  // For each target string z, some member sent to z.
  std::optional<PartialMap> witness;

  std::optional<BStr> operator()(const BStr& x) const { return map(x); }
};

inline PartialMap total(std::function<BStr(const BStr&)> f) {
  return [f = std::move(f)](const BStr& x) -> std::optional<BStr> { return f(x); };
}

inline Compression identity_compression() {
  auto id = total([](const BStr& x) { return x; });
  return {id, id};
}

// ------------------------------------------------------------------- sets

struct RankedSet {
  std::string name;
  Predicate member;
  std::optional<Ranker> ranker;
  std::optional<Compression> compressor;
  // Present when the set is finite and listed explicitly.
  std::optional<std::vector<BStr>> finite_elements;

  bool contains(const BStr& x) const { return member(x); }
};

// -------------------------------------------------------- partial functions

// Stand-in for the i-th machine: eval(x, s) is the output if the
// computation halts within s steps, nullopt otherwise.
struct PartialFn {
  std::string name;
  std::function<std::optional<BStr>(const BStr&, std::uint64_t)> eval;
  // True for functions that halt on every input.
  bool total = false;

  std::optional<BStr> operator()(const BStr& x, std::uint64_t steps) const {
    return eval(x, steps);
  }
};

// Builds a step-monotone PartialFn from a halting-time function
// (nullopt = never halts) and an output function.
inline PartialFn timed_fn(std::string name,
                          std::function<std::optional<std::uint64_t>(const BStr&)> cost,
                          std::function<BStr(const BStr&)> value, bool total) {
  PartialFn f;
  f.name = std::move(name);
  f.total = total;
  f.eval = [cost = std::move(cost), value = std::move(value)](
               const BStr& x, std::uint64_t steps) -> std::optional<BStr> {
    auto c = cost(x);
    if (!c || *c > steps) return std::nullopt;
    return value(x);
  };
  return f;
}

namespace catalog {

inline PartialFn identity() {
  return timed_fn(
      "identity", [](const BStr& x) { return std::optional<std::uint64_t>(x.size() + 1); },
      [](const BStr& x) { return x; }, true);
}

inline PartialFn constant(const BStr& c) {
  return timed_fn(
      c.empty() ? "constant_eps" : "const:" + c.str(),
      [](const BStr&) { return std::optional<std::uint64_t>(1); },
      [c](const BStr&) { return c; }, true);
}

inline PartialFn constant_eps() { return constant(BStr{}); }

inline PartialFn shift_by(long long k) {
  return timed_fn(
      "shift:" + std::to_string(k),
      [](const BStr& x) { return std::optional<std::uint64_t>(x.size() + 1); },
      [k](const BStr& x) { return shift(x, k); }, true);
}

// Identity on odd-length inputs, runs forever on even-length ones.
inline PartialFn diverge_on_even_length() {
  return timed_fn(
      "diverge_even",
      [](const BStr& x) -> std::optional<std::uint64_t> {
        if (x.size() % 2 == 0) return std::nullopt;
        return x.size() + 1;
      },
      [](const BStr& x) { return x; }, false);
}

// Halts in one step on listed inputs, runs forever elsewhere.
inline PartialFn finite_table(std::map<BStr, BStr> table, std::string name = "table") {
  auto shared = std::make_shared<const std::map<BStr, BStr>>(std::move(table));
  return timed_fn(
      std::move(name),
      [shared](const BStr& x) -> std::optional<std::uint64_t> {
        if (shared->count(x)) return 1;
        return std::nullopt;
      },
      [shared](const BStr& x) { return shared->at(x); }, false);
}

inline PartialFn divergent() {
  return timed_fn(
      "divergent", [](const BStr&) { return std::optional<std::uint64_t>(); },
      [](const BStr& x) { return x; }, false);
}

inline std::map<BStr, BStr> default_table() {
  using namespace literals;
  return {{"eps"_b, "0"_b}, {"0"_b, "eps"_b}, {"1"_b, "1"_b}, {"001"_b, "10"_b}};
}

// identity, constant_eps, shift:1, diverge_even, table
inline std::vector<PartialFn> shipped() {
  return {identity(), constant_eps(), shift_by(1), diverge_on_even_length(),
          finite_table(default_table())};
}

// Names accepted: identity, constant_eps, const:BITS, shift:K, diverge_even,
// table, divergent.
inline PartialFn by_name(const std::string& name) {
  if (name == "identity") return identity();
  if (name == "constant_eps") return constant_eps();
  if (name == "diverge_even") return diverge_on_even_length();
  if (name == "table") return finite_table(default_table());
  if (name == "divergent") return divergent();
  if (name.rfind("shift:", 0) == 0) {
    try {
      return shift_by(std::stoll(name.substr(6)));
    } catch (const std::logic_error&) {
      throw configuration_error("bad shift amount in '" + name + "'");
    }
  }
  if (name.rfind("const:", 0) == 0) return constant(BStr::parse(name.substr(6)));
  throw configuration_error("unknown partial function '" + name + "'");
}

// Comma-separated list; "shipped" expands to the default catalog.
inline std::vector<PartialFn> parse_list(const std::string& list) {
  std::vector<PartialFn> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    if (item == "shipped") {
      for (auto& f : shipped()) out.push_back(std::move(f));
    } else {
      out.push_back(by_name(item));
    }
  }
  return out;
}

}  // namespace catalog

// ------------------------------------------------------------ verification

struct VerifyFailure {
  BStr input;
  std::string expected;
  std::string actual;
  std::string contract;

  friend bool operator==(const VerifyFailure&, const VerifyFailure&) = default;
};

struct VerifyReport {
  std::string subject;
  std::uint64_t checked = 0;
  std::vector<VerifyFailure> failures;
  // Warnings and scope remarks; these do not make the report unclean.
  std::vector<std::string> notes;

  bool clean() const { return failures.empty(); }

  void fail(const BStr& x, std::string expected, std::string actual, std::string contract) {
    failures.push_back({x, std::move(expected), std::move(actual), std::move(contract)});
  }

  void merge(const VerifyReport& other) {
    checked += other.checked;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }

  // One line per failure, tab separated, after a summary line.
  std::string to_table() const {
    std::ostringstream os;
    os << "subject\t" << subject << "\nchecked\t" << checked << "\nfailures\t"
       << failures.size() << "\n";
    for (const auto& n : notes) os << "note\t" << n << "\n";
    if (!failures.empty()) os << "input\texpected\tactual\tcontract\n";
    for (const auto& f : failures)
      os << f.input.str() << "\t" << f.expected << "\t" << f.actual << "\t" << f.contract
         << "\n";
    return os.str();
  }

  friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

// Number of members that are shortlex-<= x, by enumerating every such string.
inline Rank brute_rank(const Predicate& member, const BStr& x) {
  std::uint64_t count = 0;
  if (!x.empty()) for_each_upto(x.size() - 1, [&](const BStr& z) { count += member(z); });
  std::string s(x.size(), '0');
  while (true) {
    BStr z(s);
    count += member(z);
    if (z == x) break;
    std::size_t i = s.size();
    while (i > 0 && s[i - 1] == '1') s[--i] = '0';
    s[i - 1] = '1';
  }
  return Rank(count);
}

// Cumulative member counts for every string up to a length bound.
class BruteRankTable {
 public:
  BruteRankTable(const Predicate& member, std::size_t max_len) : max_len_(max_len) {
    cumulative_.reserve(count_upto(max_len));
    in_.reserve(count_upto(max_len));
    std::uint64_t running = 0;
    for_each_upto(max_len, [&](const BStr& x) {
      bool m = member(x);
      running += m;
      in_.push_back(m);
      cumulative_.push_back(running);
    });
  }

  std::size_t max_len() const { return max_len_; }
  std::uint64_t rank(const BStr& x) const { return cumulative_.at(index_u64(x)); }
  bool member(const BStr& x) const { return in_.at(index_u64(x)); }
  std::uint64_t total() const { return cumulative_.empty() ? 0 : cumulative_.back(); }

  StrongRanker as_strong() const {
    auto self = std::make_shared<BruteRankTable>(*this);
    return {[self](const BStr& x) -> Rank {
      if (x.size() > self->max_len())
        throw resource_error("brute rank table covers only |x| <= " +
                             std::to_string(self->max_len()));
      return Rank(self->rank(x));
    }};
  }

 private:
  std::size_t max_len_;
  std::vector<std::uint64_t> cumulative_;
  std::vector<bool> in_;
};

// Walks the members of a decidable set in shortlex order, remembering what
// it has seen. Safe to share between threads.
class MemberScanner {
 public:
  explicit MemberScanner(Predicate member, std::size_t max_len = 24)
      : member_(std::move(member)), max_len_(max_len) {}

  // The n-th member (1-based), or nullopt if the scan limit is reached first.
  std::optional<BStr> nth(const Integer& n) {
    if (n < 1) return std::nullopt;
    std::lock_guard<std::mutex> lock(mutex_);
    while (Integer(found_.size()) < n) {
      if (next_.size() > max_len_) return std::nullopt;
      if (member_(next_)) found_.push_back(next_);
      advance(next_);
    }
    return found_[static_cast<std::size_t>(n - 1)];
  }

  // Number of members shortlex-<= x.
  std::uint64_t count_le(const BStr& x) {
    if (x.size() > max_len_)
      throw resource_error("member scan limited to length " + std::to_string(max_len_));
    std::lock_guard<std::mutex> lock(mutex_);
    while (next_ <= x) {
      if (member_(next_)) found_.push_back(next_);
      advance(next_);
    }
    return std::upper_bound(found_.begin(), found_.end(), x) - found_.begin();
  }

  std::size_t max_len() const { return max_len_; }

 private:
  Predicate member_;
  std::size_t max_len_;
  std::mutex mutex_;
  std::vector<BStr> found_;
  BStr next_;
};

namespace detail {

template <class F>
std::optional<std::string> guarded(F&& f, std::string& out) {
  try {
    out = f();
    return std::nullopt;
  } catch (const std::exception& e) {
    return std::string("threw: ") + e.what();
  }
}

inline const Ranker& require_ranker(const RankedSet& set) {
  if (!set.ranker) throw configuration_error("set '" + set.name + "' has no ranker");
  return *set.ranker;
}

}  // namespace detail

inline VerifyReport verify_strong(const RankedSet& set, std::size_t max_len) {
  const Ranker& r = detail::require_ranker(set);
  if (kind_of(r) != RankerKind::strong)
    throw configuration_error("set '" + set.name + "' has a " + to_string(kind_of(r)) +
                              " ranker, strong required");
  const auto& strong = std::get<StrongRanker>(r);
  BruteRankTable oracle(set.member, max_len);
  VerifyReport rep;
  rep.subject = set.name + " strong";
  for_each_upto(max_len, [&](const BStr& x) {
    ++rep.checked;
    std::string expected = std::to_string(oracle.rank(x)), actual;
    if (auto err = detail::guarded([&] { return strong(x).str(); }, actual)) {
      rep.fail(x, expected, *err, "strong");
    } else if (actual != expected) {
      rep.fail(x, expected, actual, "strong");
    }
  });
  return rep;
}

inline VerifyReport verify_semistrong(const RankedSet& set, std::size_t max_len) {
  const Ranker& r = detail::require_ranker(set);
  if (kind_of(r) != RankerKind::semistrong)
    throw configuration_error("set '" + set.name + "' has a " + to_string(kind_of(r)) +
                              " ranker, semistrong required");
  const auto& semi = std::get<SemistrongRanker>(r);
  BruteRankTable oracle(set.member, max_len);
  VerifyReport rep;
  rep.subject = set.name + " semistrong";
  for_each_upto(max_len, [&](const BStr& x) {
    ++rep.checked;
    std::string expected = oracle.member(x) ? std::to_string(oracle.rank(x)) : "out";
    std::string actual;
    if (auto err = detail::guarded([&] { return to_string(semi(x)); }, actual)) {
      rep.fail(x, expected, *err, "semistrong");
    } else if (actual != expected) {
      rep.fail(x, expected, actual, "semistrong");
    }
  });
  return rep;
}

// Accepts any ranker kind; only members are checked.
inline VerifyReport verify_weak(const RankedSet& set, std::size_t max_len) {
  const Ranker& r = detail::require_ranker(set);
  BruteRankTable oracle(set.member, max_len);
  VerifyReport rep;
  rep.subject = set.name + " weak";
  for_each_upto(max_len, [&](const BStr& x) {
    if (!oracle.member(x)) return;
    ++rep.checked;
    std::string expected = std::to_string(oracle.rank(x)), actual;
    auto err = detail::guarded(
        [&] {
          auto v = rank_value(r, x);
          return v ? v->str() : std::string("out");
        },
        actual);
    if (err) {
      rep.fail(x, expected, *err, "weak");
    } else if (actual != expected) {
      rep.fail(x, expected, actual, "weak");
    }
  });
  return rep;
}

// Checks, over members and targets of length <= max_len: the map is defined
// on members, lands in the target, is injective, and (when a witness is
// attached) every target string is hit by a member via the witness.
inline VerifyReport verify_compression(const RankedSet& set, const Predicate& target,
                                       std::size_t max_len) {
  if (!set.compressor) throw configuration_error("set '" + set.name + "' has no compressor");
  const Compression& c = *set.compressor;
  VerifyReport rep;
  rep.subject = set.name + " compression";
  std::unordered_map<BStr, BStr> seen;
  for_each_upto(max_len, [&](const BStr& x) {
    if (!set.member(x)) return;
    ++rep.checked;
    std::optional<BStr> y;
    try {
      y = c.map(x);
    } catch (const std::exception& e) {
      rep.fail(x, "defined", std::string("threw: ") + e.what(), "domain");
      return;
    }
    if (!y) {
      rep.fail(x, "defined", "undefined", "domain");
      return;
    }
    if (!target(*y)) rep.fail(x, "image in target", y->str(), "image");
    auto [it, fresh] = seen.emplace(*y, x);
    if (!fresh) rep.fail(x, "distinct from " + it->second.str(), y->str(), "injective");
  });
  if (!c.witness) {
    rep.notes.push_back("warning: no witness attached, surjectivity not checked");
    return rep;
  }
  for_each_upto(max_len, [&](const BStr& z) {
    if (!target(z)) return;
    ++rep.checked;
    std::optional<BStr> w;
    try {
      w = (*c.witness)(z);
    } catch (const std::exception& e) {
      rep.fail(z, "witness", std::string("threw: ") + e.what(), "surjective");
      return;
    }
    if (!w) {
      rep.fail(z, "witness", "undefined", "surjective");
      return;
    }
    if (!set.member(*w)) {
      rep.fail(z, "member witness", w->str(), "surjective");
      return;
    }
    std::optional<BStr> back;
    try {
      back = c.map(*w);
    } catch (const std::exception& e) {
      rep.fail(z, z.str(), std::string("threw: ") + e.what(), "surjective");
      return;
    }
    if (!back || *back != z)
      rep.fail(z, z.str(), back ? back->str() : "undefined", "surjective");
  });
  return rep;
}

inline Predicate sigma_star_member() {
  return [](const BStr&) { return true; };
}

// The least y with r(y) >= n, by binary search over lengths and then
// numerals; nullopt if no such y has length <= max_len.
inline std::optional<BStr> select_by_rank(const StrongRanker& r, const Rank& n,
                                          std::size_t max_len) {
  std::size_t len = 0;
  while (r(BStr::ones(len)) < n)
    if (++len > max_len) return std::nullopt;
  Integer lo = 0, hi = pow2(len) - 1;
  while (lo < hi) {
    Integer mid = (lo + hi) / 2;
    if (r(from_numeral(mid, len)) >= n) hi = mid;
    else lo = mid + 1;
  }
  return from_numeral(lo, len);
}

// x -> the r(x)-th string of Sigma*, or eps when r(x) is 0 or NotInSet.
inline Compression rank_to_compression(const Ranker& r) {
  Compression c;
  c.map = [r](const BStr& x) -> std::optional<BStr> {
    auto v = rank_value(r, x);
    if (!v || *v < 1) return BStr{};
    return unrank(*v);
  };
  return c;
}

// As above, with a witness: z goes to the rank_sigma_star(z)-th member.
inline Compression rank_to_compression(const Ranker& r, Predicate member,
                                       std::size_t scan_len = 24) {
  Compression c = rank_to_compression(r);
  if (kind_of(r) == RankerKind::strong) {
    // Longest member length tried before giving up.
    const std::size_t cap = std::max<std::size_t>(scan_len, 4096);
    c.witness = [strong = std::get<StrongRanker>(r), cap](const BStr& z) -> std::optional<BStr> {
      auto w = select_by_rank(strong, rank_sigma_star(z), cap);
      if (!w) throw resource_error("no member of rank " + rank_sigma_star(z).str());
      return w;
    };
    return c;
  }
  auto scanner = std::make_shared<MemberScanner>(std::move(member), scan_len);
  c.witness = [scanner](const BStr& z) -> std::optional<BStr> {
    auto w = scanner->nth(rank_sigma_star(z));
    if (!w)
      throw resource_error("member scan exhausted at length " +
                           std::to_string(scanner->max_len()));
    return w;
  };
  return c;
}

}  // namespace rankkit
