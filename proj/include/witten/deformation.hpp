// Invariant-polynomial deformations p(xi) = 1/2||xi||^2 + sum_j delta_j
// p_j(xi) on the Cartan subalgebra, their gradients and Hessians as series,
// the formal change of variables p'(xi) = lambda + rho, and the determinant
// factors entering the localization formulas.
//
// Everything is computed in simple-root coordinates. With G the scaled Gram
// matrix and dP the coordinate partials of p, the metric gradient is G^{-1}
// dP, and two shortcuts remove G from the hot paths:
//   alpha . p'(xi)              = alpha^T dP(xi)
//   (p''^{-1} grad a) . grad b  = (da)^T (D2p)^{-1} (db)
// where D2p is the plain second-derivative matrix (G + sum delta_j D2p_j).
#pragma once

#include "witten/poly.hpp"
#include "witten/root_system.hpp"
#include "witten/super_series.hpp"

#include <vector>

namespace witten::deform {

using series::GeneratorTable;
using series::Monomial;
using series::SeriesMatrix;
using series::SuperSeries;
using series::TablePtr;

// The deformation part of p: pairs (even generator index, invariant p_j).
// The quadratic leading term is implicit.
struct DeformedP {
  std::vector<std::pair<int, RatPoly>> terms;

  static DeformedP make(const lie::RootSystem& rs,
                        std::vector<std::pair<int, RatPoly>> terms) {
    DeformedP p;
    p.terms = std::move(terms);
    for (const auto& [gen, poly] : p.terms) {
      if (poly.nvars() != rs.rank())
        throw std::invalid_argument("deformation polynomial has wrong arity");
      if (poly.degree() < 2)
        throw std::invalid_argument(
            "deformation polynomials must have degree >= 2");
      if (!is_invariant(rs, poly, {}))
        throw std::invalid_argument(
            "deformation polynomial is not W-invariant");
    }
    return p;
  }

  static DeformedP quadratic() { return DeformedP{}; }
};

template <class R> using SeriesPoint = std::vector<SuperSeries<R>>;

// Exact polynomial evaluated at a series point (even subalgebra).
template <class R>
SuperSeries<R> eval_poly(const TablePtr& table, const RatPoly& p,
                         const SeriesPoint<R>& pt) {
  const int n = p.nvars();
  if (static_cast<int>(pt.size()) != n)
    throw std::invalid_argument("series point has wrong arity");
  // memoized powers per coordinate
  std::vector<std::vector<SuperSeries<R>>> pows(n);
  for (int i = 0; i < n; ++i) pows[i].push_back(SuperSeries<R>::one(table));
  auto power = [&](int i, int e) -> const SuperSeries<R>& {
    while (static_cast<int>(pows[i].size()) <= e)
      pows[i].push_back(pows[i].back() * pt[i]);
    return pows[i][e];
  };
  SuperSeries<R> acc(table);
  for (const auto& [exps, c] : p.terms()) {
    SuperSeries<R> term = SuperSeries<R>::one(table) * Cx<R>(Num<R>::from_rat(c));
    for (int i = 0; i < n; ++i)
      if (exps[i] > 0) term *= power(i, exps[i]);
    acc += term;
  }
  return acc;
}

// Coordinate partials dP(xi)_i = d p / d x_i as series (including the
// quadratic term G xi and the delta-weighted deformation parts).
template <class R>
SeriesPoint<R> coord_partials(const lie::RootSystem& rs, const DeformedP& p,
                              const SeriesPoint<R>& xi) {
  const int n = rs.rank();
  const TablePtr& table = xi.at(0).table();
  SeriesPoint<R> d(n, SuperSeries<R>(table));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!rs.gram()(i, j).is_zero())
        d[i] += xi[j] * Cx<R>(Num<R>::from_rat(rs.gram()(i, j)));
  for (const auto& [gen, poly] : p.terms) {
    SuperSeries<R> delta = SuperSeries<R>::even_generator(table, gen);
    for (int i = 0; i < n; ++i) {
      RatPoly dp = poly.derivative(i);
      if (dp.is_zero()) continue;
      d[i] += delta * eval_poly<R>(table, dp, xi);
    }
  }
  return d;
}

// Metric gradient G^{-1} dP; equals xi for the quadratic p.
template <class R>
SeriesPoint<R> grad(const lie::RootSystem& rs, const DeformedP& p,
                    const SeriesPoint<R>& xi) {
  const int n = rs.rank();
  RatMat ginv = rs.gram().inverse();
  SeriesPoint<R> d = coord_partials<R>(rs, p, xi);
  SeriesPoint<R> g(n, SuperSeries<R>(xi.at(0).table()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!ginv(i, j).is_zero())
        g[i] += d[j] * Cx<R>(Num<R>::from_rat(ginv(i, j)));
  return g;
}

// Plain second-derivative matrix D2p(xi) = G + sum_j delta_j D2p_j(xi).
template <class R>
SeriesMatrix<R> hess_coord(const lie::RootSystem& rs, const DeformedP& p,
                           const SeriesPoint<R>& xi) {
  const int n = rs.rank();
  const TablePtr& table = xi.at(0).table();
  SeriesMatrix<R> h(table, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!rs.gram()(i, j).is_zero())
        h(i, j) = SuperSeries<R>(table, Cx<R>(Num<R>::from_rat(rs.gram()(i, j))));
  for (const auto& [gen, poly] : p.terms) {
    SuperSeries<R> delta = SuperSeries<R>::even_generator(table, gen);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        RatPoly dd = poly.derivative(i).derivative(j);
        if (dd.is_zero()) continue;
        SuperSeries<R> e = delta * eval_poly<R>(table, dd, xi);
        h(i, j) += e;
        if (j != i) h(j, i) += e;
      }
  }
  return h;
}

// Hessian as an operator on t: G^{-1} D2p. Constant term is the identity.
template <class R>
SeriesMatrix<R> hess_operator(const lie::RootSystem& rs, const DeformedP& p,
                              const SeriesPoint<R>& xi) {
  const int n = rs.rank();
  RatMat ginv = rs.gram().inverse();
  SeriesMatrix<R> d2 = hess_coord<R>(rs, p, xi);
  SeriesMatrix<R> h(xi.at(0).table(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!ginv(i, k).is_zero())
          h(i, j) += d2(k, j) * Cx<R>(Num<R>::from_rat(ginv(i, k)));
  return h;
}

template <class R>
SeriesPoint<R> constant_point(const TablePtr& table, const RatVec& x) {
  SeriesPoint<R> pt;
  pt.reserve(x.size());
  for (const Rat& c : x)
    pt.emplace_back(table, Cx<R>(Num<R>::from_rat(c)));
  return pt;
}

// Solves grad p (xi) = target by fixed-point iteration
//   xi <- target - G^{-1} dq(xi),
// which raises the minimal delta-degree of the residual every step and
// terminates within the truncation order.
template <class R>
SeriesPoint<R> solve_xi(const lie::RootSystem& rs, const DeformedP& p,
                        const TablePtr& table, const RatVec& target_root) {
  const int n = rs.rank();
  SeriesPoint<R> target = constant_point<R>(table, target_root);
  if (p.terms.empty()) return target;
  RatMat ginv = rs.gram().inverse();
  SeriesPoint<R> xi = target;
  for (int it = 0; it <= table->truncation + 1; ++it) {
    // dq(xi), the deformation part of the partials
    SeriesPoint<R> dq(n, SuperSeries<R>(table));
    for (const auto& [gen, poly] : p.terms) {
      SuperSeries<R> delta = SuperSeries<R>::even_generator(table, gen);
      for (int i = 0; i < n; ++i) {
        RatPoly dp = poly.derivative(i);
        if (!dp.is_zero()) dq[i] += delta * eval_poly<R>(table, dp, xi);
      }
    }
    SeriesPoint<R> next(n, SuperSeries<R>(table));
    for (int i = 0; i < n; ++i) {
      next[i] = target[i];
      for (int j = 0; j < n; ++j)
        if (!ginv(i, j).is_zero())
          next[i] -= dq[j] * Cx<R>(Num<R>::from_rat(ginv(i, j)));
    }
    bool fixed = true;
    for (int i = 0; i < n && fixed; ++i)
      fixed = max_coef_diff(next[i], xi[i]) == R(0);
    xi = std::move(next);
    if (fixed) break;
  }
  return xi;
}

enum class DetVariant { Full, SubalgebraK, Ratio };

// det^{1/2} p''(xi) restricted per variant:
//   Full:        sqrt(det p''_t) * prod_{R+}   (alpha.p')/(alpha.xi)
//   SubalgebraK: sqrt(det p''_t) * prod_{K,+}  (alpha.p')/(alpha.xi)
//   Ratio:       prod_{R+ \ K,+} (alpha.p')/(alpha.xi)
template <class R>
SuperSeries<R> det_half_pp(const lie::RootSystem& rs, const DeformedP& p,
                           const SeriesPoint<R>& xi,
                           const std::vector<int>& k_roots,
                           DetVariant variant) {
  const int n = rs.rank();
  const TablePtr& table = xi.at(0).table();
  std::vector<bool> in_k(rs.n_plus(), false);
  for (int idx : k_roots) {
    if (idx < 0 || idx >= rs.n_plus())
      throw std::invalid_argument("K root index out of range");
    in_k[idx] = true;
  }

  SuperSeries<R> out = SuperSeries<R>::one(table);
  if (variant != DetVariant::Ratio) {
    // sqrt(det of the t-block operator) = sqrt(det D2p / det G)
    SuperSeries<R> det_c = series::matrix_det(hess_coord<R>(rs, p, xi));
    Rat detg = rs.gram().det();
    out = series::sqrt(det_c * Cx<R>(R(1) / Num<R>::from_rat(detg)));
  }

  SeriesPoint<R> dp = coord_partials<R>(rs, p, xi);
  for (int ri = 0; ri < rs.n_plus(); ++ri) {
    bool include = variant == DetVariant::Full ||
                   (variant == DetVariant::SubalgebraK && in_k[ri]) ||
                   (variant == DetVariant::Ratio && !in_k[ri]);
    if (!include) continue;
    const auto& alpha = rs.positive_roots()[ri];
    SuperSeries<R> num(table), den(table);
    for (int i = 0; i < n; ++i) {
      if (alpha[i] == 0) continue;
      Cx<R> ai(R(static_cast<double>(alpha[i])));
      num += dp[i] * ai; // alpha^T dP = alpha . p'(xi)
      for (int j = 0; j < n; ++j)
        if (!rs.gram()(i, j).is_zero())
          den += xi[j] * (ai * Cx<R>(Num<R>::from_rat(rs.gram()(i, j))));
    }
    out *= num * series::invert(den);
  }
  return out;
}

// One handle of odd data: P^{(1)} = sum_i eps_i^{(1)} p_i and likewise
// P^{(2)}; pairs of (odd generator index, polynomial).
struct OddHandle {
  std::vector<std::pair<int, RatPoly>> p1;
  std::vector<std::pair<int, RatPoly>> p2;
};

// R~(xi) = sum_i sigma_i p_i(xi)
//          - (1/2 pi i) sum_j (dP1_j)^T (D2p)^{-1} (dP2_j).
template <class R>
SuperSeries<R> rtilde(const lie::RootSystem& rs, const DeformedP& p,
                      const SeriesPoint<R>& xi,
                      const std::vector<std::pair<int, RatPoly>>& sigmas,
                      const std::vector<OddHandle>& handles) {
  const int n = rs.rank();
  const TablePtr& table = xi.at(0).table();
  SuperSeries<R> out(table);
  for (const auto& [gen, poly] : sigmas)
    out += SuperSeries<R>::even_generator(table, gen) *
           eval_poly<R>(table, poly, xi);
  if (handles.empty()) return out;

  SeriesMatrix<R> d2inv = series::matrix_inverse(hess_coord<R>(rs, p, xi));
  // -1/(2 pi i) = i/(2 pi)
  Cx<R> pref(R(0), R(1) / (Num<R>::pi() + Num<R>::pi()));
  for (const auto& h : handles) {
    auto odd_partials =
        [&](const std::vector<std::pair<int, RatPoly>>& ps) -> SeriesPoint<R> {
      SeriesPoint<R> v(n, SuperSeries<R>(table));
      for (const auto& [odd, poly] : ps) {
        SuperSeries<R> eps = SuperSeries<R>::odd_generator(table, odd);
        for (int i = 0; i < n; ++i) {
          RatPoly dp = poly.derivative(i);
          if (!dp.is_zero()) v[i] += eps * eval_poly<R>(table, dp, xi);
        }
      }
      return v;
    };
    SeriesPoint<R> d1 = odd_partials(h.p1);
    SeriesPoint<R> d2 = odd_partials(h.p2);
    SeriesPoint<R> u = d2inv.apply(d1);
    SuperSeries<R> pair(table);
    for (int i = 0; i < n; ++i) pair += u[i] * d2[i];
    out += pair * pref;
  }
  return out;
}

} // namespace witten::deform
