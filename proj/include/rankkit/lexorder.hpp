#pragma once

// Shortlex order on {0,1}*: ranks, unranking and the clamped shift.
//
// Strings are ordered first by length, then as binary numerals, so
//   eps < 0 < 1 < 00 < 01 < 10 < 11 < 000 < ...
// rank_sigma_star(x) is the 1-based position of x in that list and
// index(x) = rank_sigma_star(x) - 1 the 0-based one.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "rankkit/errors.hpp"

namespace rankkit {

using Integer = boost::multiprecision::cpp_int;
// Values of ranking functions. Always non-negative.
using Rank = Integer;

class BStr {
 public:
  BStr() = default;

  explicit BStr(std::string bits) : bits_(std::move(bits)) {
    for (char c : bits_) {
      if (c != '0' && c != '1') {
        throw domain_error("BStr: invalid character '" + std::string(1, c) +
                           "' (expected 0 or 1)");
      }
    }
  }

  // Accepts the textual form: a run of 0/1 characters or the token "eps".
  static BStr parse(std::string_view text) {
    if (text == "eps") return BStr{};
    if (text.empty()) throw domain_error("BStr: empty text (use \"eps\")");
    return BStr(std::string(text));
  }

  static BStr zeros(std::size_t n) { return BStr(std::string(n, '0')); }
  static BStr ones(std::size_t n) { return BStr(std::string(n, '1')); }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool bit(std::size_t i) const { return bits_.at(i) == '1'; }
  char operator[](std::size_t i) const { return bits_[i]; }
  char back() const { return bits_.back(); }
  const std::string& bits() const noexcept { return bits_; }

  // Textual form; the empty string renders as "eps".
  std::string str() const { return bits_.empty() ? std::string("eps") : bits_; }

  BStr prefix(std::size_t n) const { return BStr(bits_.substr(0, n), trusted{}); }
  BStr substr(std::size_t pos, std::size_t n = std::string::npos) const {
    return BStr(bits_.substr(pos, n), trusted{});
  }
  // Drops the last n characters (all of them when n >= size()).
  BStr drop_last(std::size_t n) const {
    return n >= bits_.size() ? BStr{} : prefix(bits_.size() - n);
  }
  bool starts_with(const BStr& p) const { return bits_.starts_with(p.bits_); }

  BStr& push_back(char c) {
    if (c != '0' && c != '1') throw domain_error("BStr: invalid character");
    bits_.push_back(c);
    return *this;
  }
  BStr& append(const BStr& other) {
    bits_ += other.bits_;
    return *this;
  }

  friend BStr operator+(BStr a, const BStr& b) { return a.append(b); }
  friend BStr operator+(BStr a, char c) { return a.push_back(c); }

  friend bool operator==(const BStr&, const BStr&) = default;
  friend std::strong_ordering operator<=>(const BStr& a, const BStr& b) {
    if (a.bits_.size() != b.bits_.size()) return a.bits_.size() <=> b.bits_.size();
    // '0' < '1' so plain string comparison is numeral comparison here.
    int c = a.bits_.compare(b.bits_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const BStr& x) { return os << x.str(); }

 private:
  struct trusted {};
  BStr(std::string bits, trusted) : bits_(std::move(bits)) {}

  std::string bits_;
};

namespace literals {
inline BStr operator""_b(const char* s, std::size_t n) { return BStr::parse(std::string_view(s, n)); }
}  // namespace literals

inline std::strong_ordering shortlex_cmp(const BStr& x, const BStr& y) { return x <=> y; }

// 2^|x| + value(x): the number of strings shortlex-<= x.
inline Rank rank_sigma_star(const BStr& x) {
  Integer v = 1;
  for (char c : x.bits()) {
    v <<= 1;
    if (c == '1') v += 1;
  }
  return v;
}

inline Integer index(const BStr& x) { return rank_sigma_star(x) - 1; }

// Inverse of rank_sigma_star. n = 0 names no string.
inline BStr unrank(const Rank& n) {
  if (n <= 0) throw domain_error("unrank: no 0th string (ranks start at 1)");
  const auto top = boost::multiprecision::msb(n);
  std::string bits;
  bits.reserve(top);
  for (auto i = top; i-- > 0;) bits.push_back(boost::multiprecision::bit_test(n, i) ? '1' : '0');
  return BStr(std::move(bits));
}

inline BStr from_index(const Integer& idx) { return unrank(idx + 1); }

// String n places after x (n may be negative); clamps to eps below the start.
inline BStr shift(const BStr& x, const Integer& n) {
  Integer target = index(x) + n;
  if (target < 0) return BStr{};
  return from_index(target);
}

inline BStr shift(const BStr& x, long long n) { return shift(x, Integer(n)); }

// In-place shortlex successor.
inline void advance(BStr& x) {
  std::string s = x.bits();
  std::size_t i = s.size();
  while (i > 0 && s[i - 1] == '1') s[--i] = '0';
  if (i == 0) {
    s.assign(s.size() + 1, '0');
  } else {
    s[i - 1] = '1';
  }
  x = BStr(std::move(s));
}

// Strings of length <= max_len, in shortlex order.
inline std::uint64_t count_upto(std::size_t max_len) {
  if (max_len >= 63) throw resource_error("count_upto: length bound too large");
  return (std::uint64_t{1} << (max_len + 1)) - 1;
}

// Calls fn(x) for every x with |x| <= max_len, in shortlex order.
template <class Fn>
void for_each_upto(std::size_t max_len, Fn&& fn) {
  std::string s;
  for (std::size_t len = 0; len <= max_len; ++len) {
    s.assign(len, '0');
    while (true) {
      fn(BStr(s));
      std::size_t i = len;
      while (i > 0 && s[i - 1] == '1') s[--i] = '0';
      if (i == 0) break;
      s[i - 1] = '1';
    }
  }
}

// Calls fn(x) for every x of exactly length len, in order.
template <class Fn>
void for_each_of_length(std::size_t len, Fn&& fn) {
  std::string s(len, '0');
  while (true) {
    fn(BStr(s));
    std::size_t i = len;
    while (i > 0 && s[i - 1] == '1') s[--i] = '0';
    if (i == 0) break;
    s[i - 1] = '1';
  }
}

// 0-based index as a machine word, for table lookups on short strings.
inline std::uint64_t index_u64(const BStr& x) {
  if (x.size() >= 63) throw resource_error("index_u64: string too long");
  std::uint64_t v = 1;
  for (char c : x.bits()) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v - 1;
}

// Binary value of x read as a numeral (eps is 0).
inline Integer numeral(const BStr& x) {
  Integer v = 0;
  for (char c : x.bits()) {
    v <<= 1;
    if (c == '1') v += 1;
  }
  return v;
}

// The string of length len whose numeral value is v (v < 2^len).
inline BStr from_numeral(Integer v, std::size_t len) {
  std::string bits(len, '0');
  for (std::size_t i = len; i-- > 0;) {
    if (boost::multiprecision::bit_test(v, 0)) bits[i] = '1';
    v >>= 1;
  }
  return BStr(std::move(bits));
}

inline Integer pow2(std::size_t n) { return Integer(1) << n; }

}  // namespace rankkit

template <>
struct std::hash<rankkit::BStr> {
  std::size_t operator()(const rankkit::BStr& x) const noexcept {
    return std::hash<std::string>{}(x.bits()) ^ (x.size() * 0x9e3779b97f4a7c15ULL);
  }
};
