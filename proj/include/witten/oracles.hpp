// Independent brute-force and closed-form oracles used by tests, the
// acceptance suite and the CLI verify command. No production code path
// depends on anything in this module.
#pragma once

#include "witten/poly.hpp"
#include "witten/rep_volumes.hpp"
#include "witten/root_system.hpp"
#include "witten/scalar.hpp"

#include <functional>
#include <map>
#include <vector>

namespace witten::oracles {

// All dominant weights of V_lambda with their multiplicities, by
// Freudenthal's recursion. Exact integer output.
std::vector<std::pair<std::vector<long>, long long>>
freudenthal_multiplicities(const lie::RootSystem& rs,
                           const lie::Weight& lambda,
                           std::size_t budget = 200000);

// Full Weyl orbit of a weight (integer fundamental coordinates).
std::vector<std::vector<long>> weyl_orbit(const lie::RootSystem& rs,
                                          const std::vector<long>& weight);

// chi_lambda(exp mu) summed directly over the weight system.
template <class R>
Cx<R> freudenthal_character(const lie::RootSystem& rs,
                            const lie::Weight& lambda, const lie::Weight& mu,
                            std::size_t budget = 200000) {
  auto mults = freudenthal_multiplicities(rs, lambda, budget);
  RatVec mu_root = rs.weight_root_coords(mu);
  Cx<R> total;
  for (const auto& [nu, m] : mults) {
    for (const auto& eta : weyl_orbit(rs, nu)) {
      lie::Weight w(rs.rank());
      for (int i = 0; i < rs.rank(); ++i) w[i] = Rat(eta[i]);
      Rat phase = rs.inner_rr_basic(rs.weight_root_coords(w), mu_root);
      total += unit_phase<R>(phase) * Cx<R>(R(static_cast<double>(m)));
    }
  }
  return total;
}

// Finite trigonometric class functions on T, indexed by weight-lattice
// frequencies in fundamental coordinates.
template <class R> struct TrigPoly {
  std::map<std::vector<long>, Cx<R>> coef;

  long bandwidth() const {
    long b = 0;
    for (const auto& [k, c] : coef)
      for (long v : k) b = std::max(b, v < 0 ? -v : v);
    return b;
  }
};

template <class R>
TrigPoly<R> character_trig(const lie::RootSystem& rs,
                           const lie::Weight& lambda,
                           std::size_t budget = 200000) {
  TrigPoly<R> t;
  for (const auto& [nu, m] : freudenthal_multiplicities(rs, lambda, budget))
    for (const auto& eta : weyl_orbit(rs, nu))
      t.coef[eta] += Cx<R>(R(static_cast<double>(m)));
  return t;
}

template <class R> TrigPoly<R> weyl_denominator_trig(const lie::RootSystem& rs) {
  TrigPoly<R> t;
  for (const auto& w : rs.weyl_elements()) {
    lie::Weight wr = rs.apply_weyl_weight(w, rs.rho());
    std::vector<long> k(rs.rank());
    for (int i = 0; i < rs.rank(); ++i) {
      if (!wr[i].is_integer())
        throw std::logic_error("w(rho) not integral");
      k[i] = wr[i].num();
    }
    t.coef[k] += Cx<R>(R(w.parity));
  }
  return t;
}

struct MeshBelowBandwidthError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// <f, g>_G realized through the Weyl integration formula as a uniform mesh
// sum over the torus cube [0,1)^rank in coroot coordinates:
//   (1/|W|) (1/N^rank) sum_x f(x) conj(g(x)) |A(x)|^2.
// Exact for trigonometric polynomials once N exceeds the total bandwidth;
// mesh = 0 picks that N automatically.
template <class R>
Cx<R> torus_quadrature_pairing(const lie::RootSystem& rs, const TrigPoly<R>& f,
                               const TrigPoly<R>& g, long mesh = 0) {
  TrigPoly<R> a = weyl_denominator_trig<R>(rs);
  long need = f.bandwidth() + g.bandwidth() + 2 * a.bandwidth() + 1;
  if (mesh == 0) mesh = need;
  if (mesh < need)
    throw MeshBelowBandwidthError("mesh " + std::to_string(mesh) +
                                  " below bandwidth " + std::to_string(need));
  const long n = mesh;
  const int r = rs.rank();
  // root-of-unity table
  std::vector<Cx<R>> omega(n);
  for (long j = 0; j < n; ++j)
    omega[j] = unit_phase<R>(Rat(j, n));
  auto eval = [&](const TrigPoly<R>& t, const std::vector<long>& x) {
    Cx<R> v;
    for (const auto& [k, c] : t.coef) {
      long ph = 0;
      for (int i = 0; i < r; ++i)
        ph = (ph + ((k[i] % n + n) % n) * (x[i] % n)) % n;
      v += c * omega[static_cast<std::size_t>(ph)];
    }
    return v;
  };
  std::vector<long> x(r, 0);
  Cx<R> total;
  while (true) {
    Cx<R> fa = eval(f, x);
    Cx<R> ga = eval(g, x);
    Cx<R> aa = eval(a, x);
    total += fa * conj(ga) * Cx<R>(abs2(aa));
    int pos = r - 1;
    while (pos >= 0 && x[pos] == n - 1) { x[pos] = 0; --pos; }
    if (pos < 0) break;
    ++x[pos];
  }
  R cells = pow_int(R(static_cast<double>(n)), static_cast<long>(r));
  return total / Cx<R>(cells * R(static_cast<double>(rs.weyl_order())));
}

// ----- su(n) eigenvalue-model Hessian oracle ------------------------------

// p = 1/2||xi||^2 + sum_j delta_j p_j with small real deltas.
struct RealDeformation {
  std::vector<std::pair<double, RatPoly>> terms;
};

// det p''(xi)|_p computed by central finite differences of the invariant
// eigenvalue extension of p on su(n), in an orthonormal basis of the
// off-diagonal (Hermitian) directions. Richardson-combined from steps h and
// h/2; err_estimate reports their disagreement.
double sun_eigenvalue_hessian_det(const lie::RootSystem& rs_a,
                                  const RealDeformation& def,
                                  const RatVec& xi_root, double h,
                                  double* err_estimate = nullptr);

// The Lemma product (prod_alpha alpha.p'(xi)/alpha.xi)^2 evaluated with the
// same small real deltas; the identity under test equates this with the
// finite-difference determinant.
double lemma_det_p_product(const lie::RootSystem& rs,
                           const RealDeformation& def, const RatVec& xi_root);

// ----- closed-form series oracles -----------------------------------------

// zeta(2m) for 1 <= m <= 6, from the Bernoulli closed form.
template <class R> R zeta_even(int two_m) {
  if (two_m < 2 || two_m > 12 || two_m % 2 != 0)
    throw std::invalid_argument("zeta_even supports even arguments 2..12");
  static const Rat b2m[] = {Rat(1, 6),  Rat(-1, 30), Rat(1, 42),
                            Rat(-1, 30), Rat(5, 66),  Rat(-691, 2730)};
  int m = two_m / 2;
  Rat b = b2m[m - 1];
  if (b.sign() < 0) b = -b;
  // (2 pi)^{2m} |B_{2m}| / (2 (2m)!)
  Rat fact(1);
  for (int k = 2; k <= two_m; ++k) fact *= Rat(k);
  R two_pi = Num<R>::pi() + Num<R>::pi();
  return pow_int(two_pi, two_m) * Num<R>::from_rat(b / (Rat(2) * fact));
}

// sum_{n>=1} sin(2 pi n t)/n^{2m-1} for rational t, via the Bernoulli
// polynomial B_{2m-1}; orders m = 1..4.
template <class R> R clausen_series(const Rat& t_in, int m) {
  if (m < 1 || m > 4)
    throw std::invalid_argument("clausen_series supports m = 1..4");
  Rat t = t_in.frac();
  Rat b;
  switch (m) {
    case 1: b = t - Rat(1, 2); break;
    case 2: b = t * t * t - Rat(3, 2) * t * t + Rat(1, 2) * t; break;
    case 3: {
      Rat t2 = t * t, t3 = t2 * t;
      b = t3 * t2 - Rat(5, 2) * t2 * t2 + Rat(5, 3) * t3 - Rat(1, 6) * t;
      break;
    }
    default: {
      Rat t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
      b = t4 * t3 - Rat(7, 2) * t3 * t3 + Rat(7, 2) * t4 * t - Rat(7, 6) * t3 +
          Rat(1, 6) * t;
      break;
    }
  }
  int order = 2 * m - 1;
  Rat fact(1);
  for (int k = 2; k <= order; ++k) fact *= Rat(k);
  R two_pi = Num<R>::pi() + Num<R>::pi();
  R val = pow_int(two_pi, static_cast<long>(order)) *
          Num<R>::from_rat(b / (Rat(2) * fact));
  return (m % 2 == 0) ? val : -val;
}

} // namespace witten::oracles
