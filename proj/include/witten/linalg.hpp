// Small dense exact-rational matrices: just enough linear algebra for
// rank <= 8 Gram matrices and basis changes.
#pragma once

#include "witten/rational.hpp"

#include <cstddef>
#include <stdexcept>

namespace witten {

class RatMat {
public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}

  static RatMat identity(std::size_t n) {
    RatMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rat(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  friend RatMat operator*(const RatMat& x, const RatMat& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
    RatMat z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j)
          z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }

  friend bool operator==(const RatMat& x, const RatMat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  RatVec apply(const RatVec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("vector size mismatch");
    RatVec w(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!a_[i * cols_ + j].is_zero()) w[i] += a_[i * cols_ + j] * v[j];
    return w;
  }

  RatMat transpose() const {
    RatMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Gauss-Jordan inverse; throws std::domain_error if singular.
  RatMat inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("inverse of non-square");
    std::size_t n = rows_;
    RatMat a = *this, inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (piv < n && a(piv, col).is_zero()) ++piv;
      if (piv == n) throw std::domain_error("singular matrix");
      if (piv != col)
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(a(piv, j), a(col, j));
          std::swap(inv(piv, j), inv(col, j));
        }
      Rat d = a(col, col);
      for (std::size_t j = 0; j < n; ++j) { a(col, j) /= d; inv(col, j) /= d; }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == col || a(i, col).is_zero()) continue;
        Rat f = a(i, col);
        for (std::size_t j = 0; j < n; ++j) {
          a(i, j) -= f * a(col, j);
          inv(i, j) -= f * inv(col, j);
        }
      }
    }
    return inv;
  }

  Rat det() const {
    if (rows_ != cols_) throw std::invalid_argument("det of non-square");
    std::size_t n = rows_;
    RatMat a = *this;
    Rat d(1);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (piv < n && a(piv, col).is_zero()) ++piv;
      if (piv == n) return Rat(0);
      if (piv != col) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
        d = -d;
      }
      d *= a(col, col);
      for (std::size_t i = col + 1; i < n; ++i) {
        if (a(i, col).is_zero()) continue;
        Rat f = a(i, col) / a(col, col);
        for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      }
    }
    return d;
  }

private:
  std::size_t rows_, cols_;
  std::vector<Rat> a_;
};

inline Rat dot(const RatVec& x, const RatVec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot size mismatch");
  Rat s;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// x^T M y for a symmetric form M.
inline Rat form(const RatMat& m, const RatVec& x, const RatVec& y) {
  return dot(x, m.apply(y));
}

} // namespace witten
