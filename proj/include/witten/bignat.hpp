// Unsigned arbitrary-precision integers. Only the operations the Weyl
// dimension formula needs: multiply/divide by machine words, compare,
// convert. Not a general bignum library.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace witten {

class BigNat {
public:
  BigNat() : limbs_{0} {}
  BigNat(std::uint64_t v) : limbs_{v} {}

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

  BigNat& mul_u64(std::uint64_t m) {
    unsigned __int128 carry = 0;
    for (auto& l : limbs_) {
      unsigned __int128 p = static_cast<unsigned __int128>(l) * m + carry;
      l = static_cast<std::uint64_t>(p);
      carry = p >> 64;
    }
    if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
    trim();
    return *this;
  }

  // Exact division; throws if the remainder is nonzero.
  BigNat& div_exact_u64(std::uint64_t d) {
    if (d == 0) throw std::domain_error("BigNat division by zero");
    unsigned __int128 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      unsigned __int128 cur = (rem << 64) | limbs_[i];
      limbs_[i] = static_cast<std::uint64_t>(cur / d);
      rem = cur % d;
    }
    if (rem != 0) throw std::domain_error("BigNat inexact division");
    trim();
    return *this;
  }

  double to_double() const {
    double v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;)
      v = v * 18446744073709551616.0 + static_cast<double>(limbs_[i]);
    return v;
  }

  // Value if it fits in uint64, otherwise nullopt-like flag via bool.
  bool fits_u64() const { return limbs_.size() == 1; }
  std::uint64_t as_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigNat does not fit in u64");
    return limbs_[0];
  }

  friend bool operator==(const BigNat& a, const BigNat& b) {
    return a.limbs_ == b.limbs_;
  }
  friend bool operator!=(const BigNat& a, const BigNat& b) { return !(a == b); }

  std::string str() const {
    BigNat t = *this;
    if (t.is_zero()) return "0";
    std::string out;
    while (!t.is_zero()) {
      unsigned __int128 rem = 0;
      for (std::size_t i = t.limbs_.size(); i-- > 0;) {
        unsigned __int128 cur = (rem << 64) | t.limbs_[i];
        t.limbs_[i] = static_cast<std::uint64_t>(cur / 1000000000000000000ULL);
        rem = cur % 1000000000000000000ULL;
      }
      t.trim();
      std::string chunk = std::to_string(static_cast<std::uint64_t>(rem));
      if (!t.is_zero())
        chunk = std::string(18 - chunk.size(), '0') + chunk;
      out = chunk + out;
    }
    return out;
  }

private:
  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint64_t> limbs_; // little-endian base 2^64
};

} // namespace witten
