#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rankkit/errors.hpp"

namespace rankkit {

// c0 + c1 n + c2 n^2 + ... with non-negative coefficients, so it never
// decreases on the naturals.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<std::uint64_t> c) : coeffs_(c) {}
  explicit Polynomial(std::vector<std::uint64_t> c) : coeffs_(std::move(c)) {}

  static Polynomial linear(std::uint64_t slope, std::uint64_t offset) {
    return Polynomial{offset, slope};
  }

  const std::vector<std::uint64_t>& coefficients() const { return coeffs_; }

  std::uint64_t operator()(std::uint64_t n) const {
    unsigned __int128 acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * n + *it;
      if (acc > UINT64_MAX) throw resource_error("polynomial value overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      if (coeffs_[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (i == 0 || coeffs_[i] != 1) os << coeffs_[i];
      if (i >= 1) os << "n";
      if (i >= 2) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<std::uint64_t> coeffs_;
};

}  // namespace rankkit
