// Compensated accumulation and polynomial (Neville) extrapolation for the
// weight sums: partial-sum refinement in 1/N for truncate mode, and the
// epsilon -> 0 limit for the convergence-factor mode.
#pragma once

#include "witten/scalar.hpp"

#include <stdexcept>
#include <vector>

namespace witten::engine {

// Neumaier/Kahan-Babuska compensated accumulator.
template <class R> struct Compensated {
  R sum{0};
  R comp{0};

  void add(const R& x) {
    R t = sum + x;
    if (Num<R>::abs(sum) >= Num<R>::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  R value() const { return sum + comp; }
};

template <class R> struct CompensatedCx {
  Compensated<R> re, im;
  void add(const Cx<R>& z) {
    re.add(z.re);
    im.add(z.im);
  }
  Cx<R> value() const { return Cx<R>(re.value(), im.value()); }
};

// Polynomial extrapolation to h = 0 through the nodes (h_j, v_j), h
// strictly decreasing. Returns the limit and a residual estimate (the last
// Neville correction).
template <class R>
std::pair<Cx<R>, R> neville_limit(const std::vector<R>& h,
                                  const std::vector<Cx<R>>& v) {
  const std::size_t n = h.size();
  if (n == 0 || v.size() != n)
    throw std::invalid_argument("neville_limit needs matching nonempty nodes");
  if (n == 1) return {v[0], cx_abs(v[0])};
  std::vector<Cx<R>> t = v;
  Cx<R> no_finest;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      // T_i^{(k)} = T_{i+1}^{(k-1)} + (T_{i+1}^{(k-1)} - T_i^{(k-1)}) *
      //             h_{i+k} / (h_i - h_{i+k})
      Cx<R> diff = t[i + 1] - t[i];
      t[i] = t[i + 1] + diff * Cx<R>(h[i + k] / (h[i] - h[i + k]));
    }
    if (k == n - 2) no_finest = t[0]; // extrapolant through nodes 0..n-2
  }
  // Compare the full extrapolant against the two same-depth subsets (drop
  // the coarsest node resp. the finest node) and keep the larger gap.
  R resid = cx_abs(t[0] - t[1]);
  R resid2 = cx_abs(t[0] - no_finest);
  if (resid2 > resid) resid = resid2;
  return {t[0], resid};
}

} // namespace witten::engine
