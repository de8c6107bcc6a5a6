#include "witten/rational.hpp"

#include <cctype>
#include <ostream>

namespace witten {

Rat Rat::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') {
    neg = s[pos] == '-';
    ++pos;
  }
  auto read_int = [&](const char* what) -> std::int64_t {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw std::invalid_argument(std::string("bad rational literal '") + s +
                                  "': expected " + what + " at position " +
                                  std::to_string(pos));
    std::int64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      int d = s[pos] - '0';
      if (v > (INT64_MAX - d) / 10)
        throw OverflowError("rational literal out of range: " + s);
      v = v * 10 + d;
      ++pos;
    }
    return v;
  };
  std::int64_t num = read_int("numerator");
  std::int64_t den = 1;
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    den = read_int("denominator");
    if (den == 0)
      throw std::invalid_argument("bad rational literal '" + s +
                                  "': zero denominator");
  }
  if (pos != s.size())
    throw std::invalid_argument(std::string("bad rational literal '") + s +
                                "': trailing characters at position " +
                                std::to_string(pos));
  return Rat(neg ? -num : num, den);
}

std::string Rat::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.str();
}

} // namespace witten
