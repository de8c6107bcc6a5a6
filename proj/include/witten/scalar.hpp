// Scalar abstraction: everything downstream of the exact lattice layer is
// generic over the real type R (double, or DD for extended-precision runs).
#pragma once

#include "witten/dd_real.hpp"
#include "witten/rational.hpp"

#include <cmath>

namespace witten {

template <class R> struct Num;

template <> struct Num<double> {
  static double pi() { return 3.14159265358979323846264338327950288; }
  static double from_rat(const Rat& r) { return r.to_double(); }
  static double from_double(double d) { return d; }
  static double to_double(double d) { return d; }
  static double sqrt(double x) { return std::sqrt(x); }
  static double exp(double x) { return std::exp(x); }
  static double sin(double x) { return std::sin(x); }
  static double cos(double x) { return std::cos(x); }
  static double abs(double x) { return std::fabs(x); }
};

template <> struct Num<DD> {
  static DD pi() { return ddconst::pi; }
  static DD from_rat(const Rat& r) {
    return DD(static_cast<double>(r.num())) / DD(static_cast<double>(r.den()));
  }
  static DD from_double(double d) { return DD(d); }
  static double to_double(const DD& d) { return d.to_double(); }
  static DD sqrt(const DD& x) { return dd_sqrt(x); }
  static DD exp(const DD& x) { return dd_exp(x); }
  static DD sin(const DD& x) { return dd_sin(x); }
  static DD cos(const DD& x) { return dd_cos(x); }
  static DD abs(const DD& x) { return dd_abs(x); }
};

// Minimal complex type usable with both double and DD.
template <class R> struct Cx {
  R re{};
  R im{};

  Cx() = default;
  Cx(R r) : re(r), im(R(0)) {}
  Cx(R r, R i) : re(r), im(i) {}

  friend Cx operator+(const Cx& a, const Cx& b) {
    return Cx(a.re + b.re, a.im + b.im);
  }
  friend Cx operator-(const Cx& a, const Cx& b) {
    return Cx(a.re - b.re, a.im - b.im);
  }
  friend Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return Cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend Cx operator/(const Cx& a, const Cx& b) {
    R d = b.re * b.re + b.im * b.im;
    return Cx((a.re * b.re + a.im * b.im) / d,
              (a.im * b.re - a.re * b.im) / d);
  }
  Cx& operator+=(const Cx& b) { return *this = *this + b; }
  Cx& operator-=(const Cx& b) { return *this = *this - b; }
  Cx& operator*=(const Cx& b) { return *this = *this * b; }
  Cx& operator/=(const Cx& b) { return *this = *this / b; }

  friend bool operator==(const Cx& a, const Cx& b) {
    return a.re == b.re && a.im == b.im;
  }
};

template <class R> Cx<R> conj(const Cx<R>& z) { return Cx<R>(z.re, -z.im); }

template <class R> R abs2(const Cx<R>& z) { return z.re * z.re + z.im * z.im; }

template <class R> R cx_abs(const Cx<R>& z) { return Num<R>::sqrt(abs2(z)); }

// e^{2 pi i t} with t reduced modulo 1 exactly before any floating step.
template <class R> Cx<R> unit_phase(const Rat& t) {
  Rat f = t.frac();
  R angle = Num<R>::from_rat(f) * (Num<R>::pi() + Num<R>::pi());
  return Cx<R>(Num<R>::cos(angle), Num<R>::sin(angle));
}

// sin(pi t), with t reduced modulo 2 exactly.
template <class R> R sin_pi(const Rat& t) {
  Rat f = (t / Rat(2)).frac() * Rat(2); // in [0,2)
  return Num<R>::sin(Num<R>::from_rat(f) * Num<R>::pi());
}

// Integer powers.
template <class T> T pow_int(T base, long e) {
  if (e < 0) return T(1) / pow_int(base, -e);
  T acc(1);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

// i^k as an exact complex unit.
template <class R> Cx<R> i_power(long k) {
  long m = ((k % 4) + 4) % 4;
  switch (m) {
    case 0: return Cx<R>(R(1), R(0));
    case 1: return Cx<R>(R(0), R(1));
    case 2: return Cx<R>(R(-1), R(0));
    default: return Cx<R>(R(0), R(-1));
  }
}

} // namespace witten
