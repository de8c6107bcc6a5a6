// Truncated graded-commutative formal series over complex scalars: named
// even generators (deformation and insertion parameters) and odd generators
// (anticommuting, square zero). This is the coefficient ring for every
// series-valued quantity in the localization formulas.
//
// Monomials are kept in normal order: even exponents indexed by the table,
// odd generators as an ascending bitmask. The sign of a product is
// (-1)^{#transpositions} needed to merge the two ascending odd lists.
#pragma once

#include "witten/scalar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace witten::series {

struct GeneratorTable {
  std::vector<std::string> even_names;
  std::vector<std::string> odd_names;
  int truncation = 4; // max total degree; odd generators count degree 1

  GeneratorTable() = default;
  GeneratorTable(std::vector<std::string> evens, std::vector<std::string> odds,
                 int d)
      : even_names(std::move(evens)), odd_names(std::move(odds)),
        truncation(d) {
    if (truncation < 0)
      throw std::invalid_argument("truncation must be nonnegative");
    if (odd_names.size() > 64)
      throw std::invalid_argument("at most 64 odd generators supported");
    std::vector<std::string> all = even_names;
    all.insert(all.end(), odd_names.begin(), odd_names.end());
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j)
        if (all[i] == all[j])
          throw std::invalid_argument("duplicate generator name " + all[i]);
  }

  int even_index(const std::string& name) const {
    for (std::size_t i = 0; i < even_names.size(); ++i)
      if (even_names[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown even generator " + name);
  }
  int odd_index(const std::string& name) const {
    for (std::size_t i = 0; i < odd_names.size(); ++i)
      if (odd_names[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown odd generator " + name);
  }

  friend bool operator==(const GeneratorTable& a, const GeneratorTable& b) {
    return a.even_names == b.even_names && a.odd_names == b.odd_names &&
           a.truncation == b.truncation;
  }
};

using TablePtr = std::shared_ptr<const GeneratorTable>;

inline TablePtr make_table(std::vector<std::string> evens,
                           std::vector<std::string> odds, int d) {
  return std::make_shared<const GeneratorTable>(std::move(evens),
                                                std::move(odds), d);
}

inline TablePtr scalar_table() { return make_table({}, {}, 0); }

struct Monomial {
  std::vector<std::uint8_t> even; // exponent per even generator
  std::uint64_t odd = 0;          // ascending bitmask of odd generators

  int degree() const {
    int d = 0;
    for (auto e : even) d += e;
    return d + __builtin_popcountll(odd);
  }
  bool is_one() const {
    if (odd != 0) return false;
    for (auto e : even)
      if (e) return false;
    return true;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.odd == b.odd && a.even == b.even;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.even != b.even) return a.even < b.even;
    return a.odd < b.odd;
  }
};

// Number of transpositions to merge two ascending odd lists; INT_MIN-free.
inline int odd_merge_inversions(std::uint64_t a, std::uint64_t b) {
  int inv = 0;
  std::uint64_t bb = b;
  while (bb) {
    int bit = __builtin_ctzll(bb);
    bb &= bb - 1;
    std::uint64_t higher = bit == 63 ? 0 : (a >> (bit + 1));
    inv += __builtin_popcountll(higher);
  }
  return inv;
}

// Canonical textual key: generators joined by "*", powers as "^k", table
// order (evens first). The empty monomial prints as "1".
inline std::string monomial_key(const GeneratorTable& t, const Monomial& m) {
  std::string out;
  auto append = [&out](const std::string& piece) {
    if (!out.empty()) out += "*";
    out += piece;
  };
  for (std::size_t i = 0; i < m.even.size(); ++i) {
    if (m.even[i] == 0) continue;
    std::string piece = t.even_names[i];
    if (m.even[i] > 1) piece += "^" + std::to_string(int(m.even[i]));
    append(piece);
  }
  for (std::size_t i = 0; i < t.odd_names.size(); ++i)
    if (m.odd & (1ULL << i)) append(t.odd_names[i]);
  return out.empty() ? "1" : out;
}

inline Monomial monomial_parse(const GeneratorTable& t,
                               const std::string& key) {
  Monomial m;
  m.even.assign(t.even_names.size(), 0);
  if (key == "1") return m;
  std::size_t pos = 0;
  while (pos < key.size()) {
    std::size_t star = key.find('*', pos);
    std::string piece = key.substr(pos, star == std::string::npos
                                            ? std::string::npos
                                            : star - pos);
    pos = star == std::string::npos ? key.size() : star + 1;
    int power = 1;
    std::size_t caret = piece.find('^');
    std::string name = piece;
    if (caret != std::string::npos) {
      name = piece.substr(0, caret);
      power = std::stoi(piece.substr(caret + 1));
      if (power < 1) throw std::invalid_argument("bad monomial power in " + key);
    }
    bool found = false;
    for (std::size_t i = 0; i < t.even_names.size(); ++i)
      if (t.even_names[i] == name) {
        m.even[i] = static_cast<std::uint8_t>(m.even[i] + power);
        found = true;
        break;
      }
    if (!found)
      for (std::size_t i = 0; i < t.odd_names.size(); ++i)
        if (t.odd_names[i] == name) {
          if (power != 1 || (m.odd & (1ULL << i)))
            throw std::invalid_argument("odd generator repeated in " + key);
          m.odd |= 1ULL << i;
          found = true;
          break;
        }
    if (!found)
      throw std::invalid_argument("unknown generator '" + name +
                                  "' in monomial " + key);
  }
  return m;
}

template <class R> class SuperSeries {
public:
  using Coef = Cx<R>;

  SuperSeries() : table_(scalar_table()) {}
  explicit SuperSeries(TablePtr table) : table_(std::move(table)) {}
  SuperSeries(TablePtr table, Coef constant) : table_(std::move(table)) {
    set(unit_monomial(), constant);
  }

  const TablePtr& table() const { return table_; }
  const std::map<Monomial, Coef>& terms() const { return coef_; }
  bool is_zero() const { return coef_.empty(); }

  Monomial unit_monomial() const {
    Monomial m;
    m.even.assign(table_->even_names.size(), 0);
    return m;
  }

  static SuperSeries one(TablePtr table) {
    return SuperSeries(std::move(table), Coef(R(1)));
  }

  static SuperSeries even_generator(TablePtr table, int index) {
    SuperSeries s(table);
    Monomial m = s.unit_monomial();
    if (index < 0 || index >= static_cast<int>(m.even.size()))
      throw std::invalid_argument("even generator index out of range");
    m.even[index] = 1;
    s.set(m, Coef(R(1)));
    return s;
  }

  static SuperSeries odd_generator(TablePtr table, int index) {
    SuperSeries s(table);
    if (index < 0 || index >= static_cast<int>(table->odd_names.size()))
      throw std::invalid_argument("odd generator index out of range");
    Monomial m = s.unit_monomial();
    m.odd = 1ULL << index;
    s.set(m, Coef(R(1)));
    return s;
  }

  Coef constant_term() const { return coefficient(unit_monomial()); }

  Coef coefficient(const Monomial& m) const {
    if (m.degree() > table_->truncation)
      throw std::out_of_range("monomial degree exceeds truncation");
    auto it = coef_.find(m);
    return it == coef_.end() ? Coef() : it->second;
  }

  void set(const Monomial& m, const Coef& c) {
    if (m.degree() > table_->truncation) return;
    if (c == Coef())
      coef_.erase(m);
    else
      coef_[m] = c;
  }

  void add_to(const Monomial& m, const Coef& c) {
    if (m.degree() > table_->truncation) return;
    auto it = coef_.find(m);
    if (it == coef_.end()) {
      if (!(c == Coef())) coef_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == Coef()) coef_.erase(it);
    }
  }

  friend SuperSeries operator+(const SuperSeries& a, const SuperSeries& b) {
    a.check_table(b);
    SuperSeries out = a;
    for (const auto& [m, c] : b.coef_) out.add_to(m, c);
    return out;
  }
  friend SuperSeries operator-(const SuperSeries& a, const SuperSeries& b) {
    a.check_table(b);
    SuperSeries out = a;
    for (const auto& [m, c] : b.coef_) out.add_to(m, -c);
    return out;
  }
  friend SuperSeries operator-(const SuperSeries& a) {
    SuperSeries out(a.table_);
    for (const auto& [m, c] : a.coef_) out.coef_.emplace(m, -c);
    return out;
  }

  friend SuperSeries operator*(const SuperSeries& a, const SuperSeries& b) {
    a.check_table(b);
    SuperSeries out(a.table_);
    const int cap = a.table_->truncation;
    for (const auto& [ma, ca] : a.coef_) {
      int da = ma.degree();
      for (const auto& [mb, cb] : b.coef_) {
        if (da + mb.degree() > cap) continue;
        if (ma.odd & mb.odd) continue; // repeated odd generator kills the term
        Monomial m;
        m.even.resize(ma.even.size());
        for (std::size_t i = 0; i < ma.even.size(); ++i)
          m.even[i] = static_cast<std::uint8_t>(ma.even[i] + mb.even[i]);
        m.odd = ma.odd | mb.odd;
        Coef c = ca * cb;
        if (odd_merge_inversions(ma.odd, mb.odd) & 1) c = -c;
        out.add_to(m, c);
      }
    }
    return out;
  }

  friend SuperSeries operator*(const SuperSeries& a, const Coef& s) {
    SuperSeries out(a.table_);
    if (s == Coef()) return out;
    for (const auto& [m, c] : a.coef_) out.coef_.emplace(m, c * s);
    return out;
  }
  friend SuperSeries operator*(const Coef& s, const SuperSeries& a) {
    return a * s;
  }

  SuperSeries& operator+=(const SuperSeries& b) { return *this = *this + b; }
  SuperSeries& operator-=(const SuperSeries& b) { return *this = *this - b; }
  SuperSeries& operator*=(const SuperSeries& b) { return *this = *this * b; }
  SuperSeries& operator*=(const Coef& s) { return *this = *this * s; }

  friend R max_abs_coef(const SuperSeries& a) {
    R m(0);
    for (const auto& [mo, c] : a.coef_) {
      R v = cx_abs(c);
      if (v > m) m = v;
    }
    return m;
  }

  // max |coefficient| difference; series may live on equal (not identical)
  // tables.
  friend R max_coef_diff(const SuperSeries& a, const SuperSeries& b) {
    a.check_table(b);
    R m(0);
    auto upd = [&m](const Coef& c) {
      R v = cx_abs(c);
      if (v > m) m = v;
    };
    for (const auto& [mo, c] : a.coef_) upd(c - b.coefficient(mo));
    for (const auto& [mo, c] : b.coef_)
      if (!a.coef_.count(mo)) upd(c);
    return m;
  }

private:
  void check_table(const SuperSeries& b) const {
    if (table_ == b.table_) return;
    if (!(*table_ == *b.table_))
      throw std::invalid_argument("generator table mismatch");
  }

  TablePtr table_;
  std::map<Monomial, Coef> coef_;
};

// exp(a) for augmentation-zero a (no constant term); terminates at n = D.
template <class R> SuperSeries<R> exp(const SuperSeries<R>& a) {
  if (!(a.constant_term() == Cx<R>()))
    throw std::domain_error("series exp requires zero constant term");
  SuperSeries<R> out = SuperSeries<R>::one(a.table());
  SuperSeries<R> power = out;
  R fact(1);
  const int cap = a.table()->truncation;
  for (int n = 1; n <= cap; ++n) {
    power = power * a;
    if (power.is_zero()) break;
    fact = fact * R(n);
    out += power * Cx<R>(R(1) / fact);
  }
  return out;
}

// Multiplicative inverse; requires an invertible constant term.
template <class R> SuperSeries<R> invert(const SuperSeries<R>& a) {
  Cx<R> c = a.constant_term();
  if (c == Cx<R>())
    throw std::domain_error("series inverse requires nonzero constant term");
  Cx<R> cinv = Cx<R>(R(1)) / c;
  SuperSeries<R> one = SuperSeries<R>::one(a.table());
  SuperSeries<R> n = a * cinv - one; // min degree >= 1
  SuperSeries<R> out = one;
  SuperSeries<R> power = one;
  const int cap = a.table()->truncation;
  for (int k = 1; k <= cap; ++k) {
    power = power * n;
    if (power.is_zero()) break;
    out = (k & 1) ? out - power : out + power;
  }
  return out * cinv;
}

// Principal square root; the constant term must be real and positive.
template <class R> SuperSeries<R> sqrt(const SuperSeries<R>& a) {
  Cx<R> c = a.constant_term();
  R tol = Num<R>::from_double(1e-12);
  if (!(c.re > R(0)) || Num<R>::abs(c.im) > tol * Num<R>::abs(c.re))
    throw std::domain_error(
        "series sqrt requires a positive real constant term");
  Cx<R> cinv = Cx<R>(R(1)) / c;
  SuperSeries<R> one = SuperSeries<R>::one(a.table());
  SuperSeries<R> n = a * cinv - one;
  // binomial series (1+n)^{1/2}
  SuperSeries<R> out = one;
  SuperSeries<R> power = one;
  R binom(1);
  const int cap = a.table()->truncation;
  for (int k = 1; k <= cap; ++k) {
    power = power * n;
    if (power.is_zero()) break;
    binom = binom * (R(0.5) - R(k - 1)) / R(k);
    out += power * Cx<R>(binom);
  }
  return out * Cx<R>(Num<R>::sqrt(c.re));
}

template <class R> class SeriesMatrix {
public:
  SeriesMatrix() : n_(0) {}
  SeriesMatrix(TablePtr table, int n)
      : table_(std::move(table)), n_(n),
        a_(static_cast<std::size_t>(n) * n, SuperSeries<R>(table_)) {}

  static SeriesMatrix identity(TablePtr table, int n) {
    SeriesMatrix m(table, n);
    for (int i = 0; i < n; ++i)
      m(i, i) = SuperSeries<R>::one(m.table_);
    return m;
  }

  int size() const { return n_; }
  const TablePtr& table() const { return table_; }

  SuperSeries<R>& operator()(int i, int j) { return a_[i * n_ + j]; }
  const SuperSeries<R>& operator()(int i, int j) const {
    return a_[i * n_ + j];
  }

  // Entries must lie in the even subalgebra.
  void check_even() const {
    for (const auto& s : a_)
      for (const auto& [m, c] : s.terms())
        if (m.odd != 0)
          throw std::domain_error("series matrix entry contains odd generators");
  }

  friend SeriesMatrix operator*(const SeriesMatrix& x, const SeriesMatrix& y) {
    if (x.n_ != y.n_) throw std::invalid_argument("series matrix size mismatch");
    SeriesMatrix z(x.table_, x.n_);
    for (int i = 0; i < x.n_; ++i)
      for (int k = 0; k < x.n_; ++k) {
        if (x(i, k).is_zero()) continue;
        for (int j = 0; j < x.n_; ++j)
          z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }

  std::vector<SuperSeries<R>> apply(const std::vector<SuperSeries<R>>& v) const {
    std::vector<SuperSeries<R>> w(n_, SuperSeries<R>(table_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!a_[i * n_ + j].is_zero()) w[i] += a_[i * n_ + j] * v[j];
    return w;
  }

private:
  TablePtr table_;
  int n_;
  std::vector<SuperSeries<R>> a_;
};

// Gaussian elimination over the series ring; pivots need invertible constant
// terms, which holds for every Hessian-type matrix here (constant part is a
// Gram-positive matrix).
template <class R> SuperSeries<R> matrix_det(const SeriesMatrix<R>& m) {
  m.check_even();
  int n = m.size();
  SeriesMatrix<R> a = m;
  SuperSeries<R> det = SuperSeries<R>::one(m.table());
  bool flip = false;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    R best(0);
    for (int r = col; r < n; ++r) {
      R mag = cx_abs(a(r, col).constant_term());
      if (piv < 0 || mag > best) { piv = r; best = mag; }
    }
    if (!(best > R(0)))
      throw std::domain_error("series matrix with singular constant term");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      flip = !flip;
    }
    det *= a(col, col);
    SuperSeries<R> pinv = invert(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      SuperSeries<R> f = a(r, col) * pinv;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  if (flip) det = -det;
  return det;
}

template <class R> SeriesMatrix<R> matrix_inverse(const SeriesMatrix<R>& m) {
  m.check_even();
  int n = m.size();
  // Invert the constant part numerically, then a Neumann series on the
  // nilpotent remainder.
  std::vector<Cx<R>> m0(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m0[i * n + j] = m(i, j).constant_term();
  // Gauss-Jordan with partial pivoting on |.|.
  std::vector<Cx<R>> inv0(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) inv0[i * n + i] = Cx<R>(R(1));
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    R best(0);
    for (int r = col; r < n; ++r) {
      R mag = cx_abs(m0[r * n + col]);
      if (piv < 0 || mag > best) { piv = r; best = mag; }
    }
    if (!(best > R(0)))
      throw std::domain_error("series matrix with singular constant term");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m0[piv * n + j], m0[col * n + j]);
        std::swap(inv0[piv * n + j], inv0[col * n + j]);
      }
    Cx<R> d = m0[col * n + col];
    for (int j = 0; j < n; ++j) { m0[col * n + j] /= d; inv0[col * n + j] /= d; }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Cx<R> f = m0[r * n + col];
      if (f == Cx<R>()) continue;
      for (int j = 0; j < n; ++j) {
        m0[r * n + j] -= f * m0[col * n + j];
        inv0[r * n + j] -= f * inv0[col * n + j];
      }
    }
  }
  SeriesMatrix<R> inv0_m(m.table(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inv0_m(i, j) = SuperSeries<R>(m.table(), inv0[i * n + j]);

  SeriesMatrix<R> nmat = inv0_m * m; // I + N with N of min degree >= 1
  SeriesMatrix<R> id = SeriesMatrix<R>::identity(m.table(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) nmat(i, j) -= id(i, j);
  SeriesMatrix<R> acc = id, power = id;
  const int cap = m.table()->truncation;
  for (int k = 1; k <= cap; ++k) {
    power = power * nmat;
    bool all_zero = true;
    for (int i = 0; i < n && all_zero; ++i)
      for (int j = 0; j < n; ++j)
        if (!power(i, j).is_zero()) { all_zero = false; break; }
    if (all_zero) break;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (k & 1)
          acc(i, j) -= power(i, j);
        else
          acc(i, j) += power(i, j);
  }
  return acc * inv0_m;
}

} // namespace witten::series
