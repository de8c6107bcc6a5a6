// Double-double ("extended") precision: an unevaluated sum of two doubles
// giving ~31-32 significant digits. Algorithms follow the classic error-free
// transformations (Dekker/Knuth, as in the QD library). Only the operations
// this project needs are provided: field ops, sqrt, exp, sin, cos.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace witten {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  DD(double h) : hi(h), lo(0.0) {}
  DD(double h, double l) : hi(h), lo(l) {}
  explicit DD(int v) : hi(v), lo(0.0) {}

  double to_double() const { return hi + lo; }
};

namespace ddops {

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return DD(s, b - (s - a));
}

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return DD(s, (a - (s - bb)) + (b - bb));
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return DD(p, std::fma(a, b, -p));
}

} // namespace ddops

inline DD operator+(const DD& a, const DD& b) {
  using namespace ddops;
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(const DD& a) { return DD(-a.hi, -a.lo); }
inline DD operator-(const DD& a, const DD& b) { return a + (-b); }

inline DD operator*(const DD& a, const DD& b) {
  using namespace ddops;
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD operator/(const DD& a, const DD& b) {
  using namespace ddops;
  double q1 = a.hi / b.hi;
  DD r = a - DD(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - DD(q2) * b;
  double q3 = r.hi / b.hi;
  DD q = quick_two_sum(q1, q2);
  return q + DD(q3);
}

inline DD& operator+=(DD& a, const DD& b) { return a = a + b; }
inline DD& operator-=(DD& a, const DD& b) { return a = a - b; }
inline DD& operator*=(DD& a, const DD& b) { return a = a * b; }
inline DD& operator/=(DD& a, const DD& b) { return a = a / b; }

inline bool operator==(const DD& a, const DD& b) {
  return a.hi == b.hi && a.lo == b.lo;
}
inline bool operator<(const DD& a, const DD& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DD& a, const DD& b) { return b < a; }
inline bool operator<=(const DD& a, const DD& b) { return !(b < a); }
inline bool operator>=(const DD& a, const DD& b) { return !(a < b); }

inline DD dd_abs(const DD& a) { return a.hi < 0 ? -a : a; }

namespace ddconst {
// hi/lo splittings of the usual constants (QD library values).
inline const DD pi(3.141592653589793116e+00, 1.224646799147353207e-16);
inline const DD two_pi(6.283185307179586232e+00, 2.449293598294706414e-16);
inline const DD half_pi(1.570796326794896558e+00, 6.123233995736766036e-17);
inline const DD ln2(6.931471805599452862e-01, 2.319046813846299558e-17);
} // namespace ddconst

inline DD dd_sqrt(const DD& a) {
  if (a.hi == 0.0 && a.lo == 0.0) return DD(0.0);
  if (a.hi < 0.0) throw std::domain_error("dd_sqrt of negative value");
  // One Newton step on 1/sqrt, in the Karp/Markstein form.
  double x = 1.0 / std::sqrt(a.hi);
  double ax = a.hi * x;
  return DD(ax) + (a - ddops::two_prod(ax, ax)) * DD(x * 0.5);
}

inline DD dd_ldexp(const DD& a, int n) {
  return DD(std::ldexp(a.hi, n), std::ldexp(a.lo, n));
}

inline DD dd_exp(const DD& a) {
  // e^a = 2^m * (e^r)^(2^9) with r = (a - m ln2)/2^9.
  if (a.hi > 709.0) throw std::overflow_error("dd_exp overflow");
  if (a.hi < -709.0) return DD(0.0);
  double m = std::round(a.hi / ddconst::ln2.hi);
  DD r = dd_ldexp(a - ddconst::ln2 * DD(m), -9);
  // Taylor for e^r - 1, |r| < ~0.0014.
  DD p = r;
  DD term = r;
  double fac = 1.0;
  for (int k = 2; k <= 12; ++k) {
    fac *= k;
    term = term * r;
    DD t = term / DD(fac);
    p += t;
    if (std::abs(t.hi) < 1e-40 * std::abs(p.hi)) break;
  }
  // Undo the scaling: (1+p)^2 - 1 = 2p + p^2, nine times.
  for (int k = 0; k < 9; ++k) p = dd_ldexp(p, 1) + p * p;
  return dd_ldexp(DD(1.0) + p, static_cast<int>(m));
}

namespace ddops {

inline DD sin_taylor(const DD& x) {
  DD s = x;
  DD term = x;
  DD x2 = x * x;
  for (int k = 3; k <= 35; k += 2) {
    term = term * x2 / DD(static_cast<double>(k) * (k - 1));
    term = -term;
    s += term;
    if (std::abs(term.hi) < 1e-36) break;
  }
  return s;
}

inline DD cos_taylor(const DD& x) {
  DD s(1.0);
  DD term(1.0);
  DD x2 = x * x;
  for (int k = 2; k <= 36; k += 2) {
    term = term * x2 / DD(static_cast<double>(k) * (k - 1));
    term = -term;
    s += term;
    if (std::abs(term.hi) < 1e-36) break;
  }
  return s;
}

} // namespace ddops

// Valid for arguments of moderate size (|a| < ~1e8); all callers reduce
// angles modulo 1 exactly in rational arithmetic before scaling by 2*pi.
inline void dd_sincos(const DD& a, DD& s, DD& c) {
  double k = std::round(a.to_double() / ddconst::half_pi.hi);
  DD t = a - ddconst::half_pi * DD(k);
  long q = static_cast<long>(k) & 3L;
  if (q < 0) q += 4;
  DD st = ddops::sin_taylor(t);
  DD ct = ddops::cos_taylor(t);
  switch (q) {
    case 0: s = st; c = ct; break;
    case 1: s = ct; c = -st; break;
    case 2: s = -st; c = -ct; break;
    default: s = -ct; c = st; break;
  }
}

inline DD dd_sin(const DD& a) {
  DD s, c;
  dd_sincos(a, s, c);
  return s;
}

inline DD dd_cos(const DD& a) {
  DD s, c;
  dd_sincos(a, s, c);
  return c;
}

} // namespace witten
