// Weyl-formula evaluation: dimensions, character values on conjugacy
// classes (two independent routes), and the Riemannian/symplectic volumes
// entering the localization formulas.
#pragma once

#include "witten/bignat.hpp"
#include "witten/poly.hpp"
#include "witten/root_system.hpp"
#include "witten/scalar.hpp"

#include <numeric>
#include <vector>

namespace witten::rep {

// A conjugacy-class datum: alcove point, its stabilizer subsystem, the
// invariant insertion polynomial Q, and the orientation sign exponent.
struct Marking {
  lie::Weight mu;
  std::vector<int> k_roots;  // = stabilizer_roots(mu)
  RatPoly q;                 // W_K-invariant, restricted to t
  long sign_exponent = 0;    // 2 mu . rho_K, always an integer

  static Marking make(const lie::RootSystem& rs, const lie::Weight& mu,
                      RatPoly q) {
    Marking m;
    m.mu = mu;
    m.k_roots = rs.stabilizer_roots(mu);
    m.q = std::move(q);
    if (m.q.nvars() != rs.rank())
      throw std::invalid_argument("marking polynomial has wrong arity");
    if (!is_invariant(rs, m.q, m.k_roots))
      throw std::invalid_argument("marking polynomial is not W_K-invariant");
    RatVec rho_k(rs.rank(), Rat(0));
    for (int idx : m.k_roots)
      for (int i = 0; i < rs.rank(); ++i)
        rho_k[i] += Rat(rs.positive_roots()[idx][i], 2);
    Rat se = Rat(2) * rs.inner_rr_basic(rho_k, rs.weight_root_coords(mu));
    if (!se.is_integer())
      throw std::logic_error("2 mu . rho_K is not an integer");
    m.sign_exponent = se.num();
    return m;
  }

  static Marking trivial(const lie::RootSystem& rs) {
    return make(rs, lie::Weight(rs.rank(), Rat(0)),
                RatPoly::constant(rs.rank(), Rat(1)));
  }
};

// dim V_lambda as an exact integer. Computed as a fully cancelled product of
// rational root factors; the division is exact by Weyl's formula.
inline BigNat weyl_dim(const lie::RootSystem& rs, const lie::Weight& lambda) {
  if (!rs.is_dominant_integral(lambda))
    throw std::invalid_argument("weyl_dim requires a dominant integral weight");
  lie::Weight lr(lambda);
  for (auto& k : lr) k += Rat(1); // lambda + rho
  std::vector<std::int64_t> nums, dens;
  for (int i = 0; i < rs.n_plus(); ++i) {
    Rat top = rs.root_dot_basic(i, lr);
    Rat bot = rs.root_dot_basic(i, rs.rho());
    Rat f = top / bot;
    nums.push_back(f.num());
    dens.push_back(f.den());
  }
  for (auto& d : dens) {
    for (auto& n : nums) {
      if (d == 1) break;
      std::int64_t g = std::gcd(n, d);
      n /= g;
      d /= g;
    }
  }
  BigNat out(1);
  for (auto n : nums) out.mul_u64(static_cast<std::uint64_t>(n));
  for (auto d : dens)
    if (d != 1) out.div_exact_u64(static_cast<std::uint64_t>(d));
  return out;
}

template <class R> R weyl_dim_real(const lie::RootSystem& rs,
                                   const lie::Weight& lambda) {
  return Num<R>::from_double(weyl_dim(rs, lambda).to_double());
}

template <class R> R vol_g_over_t(const lie::RootSystem& rs) {
  R prod(1);
  R two_pi = Num<R>::pi() + Num<R>::pi();
  for (int i = 0; i < rs.n_plus(); ++i)
    prod = prod * (two_pi * Num<R>::from_rat(rs.root_dot(i, rs.rho())));
  return R(1) / prod;
}

template <class R> R vol_k_over_t(const lie::RootSystem& rs,
                                  const std::vector<int>& k_roots) {
  rs.subsystem_simples(k_roots); // validates closure
  RatVec rho_k(rs.rank(), Rat(0));
  for (int idx : k_roots)
    for (int i = 0; i < rs.rank(); ++i)
      rho_k[i] += Rat(rs.positive_roots()[idx][i], 2);
  R prod(1);
  R two_pi = Num<R>::pi() + Num<R>::pi();
  for (int idx : k_roots) {
    RatVec a(rs.rank());
    for (int i = 0; i < rs.rank(); ++i)
      a[i] = Rat(rs.positive_roots()[idx][i]);
    prod = prod * (two_pi * Num<R>::from_rat(rs.inner_rr(a, rho_k)));
  }
  return R(1) / prod;
}

template <class R> R vol_g_over_k(const lie::RootSystem& rs,
                                  const std::vector<int>& k_roots) {
  return vol_g_over_t<R>(rs) / vol_k_over_t<R>(rs, k_roots);
}

template <class R> R lattice_covolume(const lie::RootSystem& rs) {
  return Num<R>::sqrt(Num<R>::from_rat(rs.covolume_sq()));
}

template <class R> R vol_g(const lie::RootSystem& rs) {
  return vol_g_over_t<R>(rs) * lattice_covolume<R>(rs);
}

template <class R> R vol_coadjoint_orbit(const lie::RootSystem& rs,
                                         const lie::Weight& mu) {
  if (!rs.is_dominant(mu))
    throw std::invalid_argument("orbit point must be in the closed chamber");
  R prod(1);
  R two_pi = Num<R>::pi() + Num<R>::pi();
  for (int i = 0; i < rs.n_plus(); ++i) {
    Rat am = rs.root_dot(i, mu);
    if (am.sign() > 0) prod = prod * (two_pi * Num<R>::from_rat(am));
  }
  return prod * vol_g_over_k<R>(rs, rs.zero_roots(mu));
}

template <class R> R vol_conjugacy_class(const lie::RootSystem& rs,
                                         const Marking& m) {
  R prod(1);
  std::vector<bool> in_k(rs.n_plus(), false);
  for (int idx : m.k_roots) in_k[idx] = true;
  for (int i = 0; i < rs.n_plus(); ++i) {
    if (in_k[i]) continue;
    prod = prod * (R(2) * sin_pi<R>(rs.root_dot_basic(i, m.mu)));
  }
  return prod * vol_g_over_k<R>(rs, m.k_roots);
}

// chi_lambda(C)/dim V_lambda through the W/W_K fixed-point sum. Terms are
// evaluated on representatives of the right cosets W_K w (inverses of the
// minimal left-coset representatives), where each term is coset-invariant.
template <class R> Cx<R> char_ratio(const lie::RootSystem& rs,
                                    const lie::Weight& lambda,
                                    const Marking& m) {
  if (!rs.is_dominant_integral(lambda))
    throw std::invalid_argument("char_ratio requires dominant integral lambda");
  lie::Weight lr(lambda);
  for (auto& k : lr) k += Rat(1);
  RatVec lr_root = rs.weight_root_coords(lr);

  std::vector<bool> in_k(rs.n_plus(), false);
  for (int idx : m.k_roots) in_k[idx] = true;
  int dim_c_half = rs.n_plus() - static_cast<int>(m.k_roots.size());

  RatVec mu_root = rs.weight_root_coords(m.mu);

  Cx<R> sum;
  for (const auto& w : rs.coset_representatives(m.k_roots)) {
    lie::WeylElement v = rs.weyl_inverse(w);
    RatVec x = rs.apply_weyl_root(v, lr_root);
    Rat phase = rs.inner_rr_basic(x, mu_root);
    R denom(1);
    for (int i = 0; i < rs.n_plus(); ++i) {
      if (in_k[i]) continue;
      RatVec a(rs.rank());
      for (int j = 0; j < rs.rank(); ++j)
        a[j] = Rat(rs.positive_roots()[i][j]);
      denom = denom * Num<R>::from_rat(rs.inner_rr(a, x));
    }
    sum += unit_phase<R>(phase) * Cx<R>(R(1) / denom);
  }
  R two_pi = Num<R>::pi() + Num<R>::pi();
  Cx<R> pref = i_power<R>(-dim_c_half) *
               Cx<R>(pow_int(two_pi, -static_cast<long>(dim_c_half)) /
                     vol_conjugacy_class<R>(rs, m));
  if (m.sign_exponent & 1) pref = -pref;
  return pref * sum;
}

template <class R> Cx<R> char_value(const lie::RootSystem& rs,
                                    const lie::Weight& lambda,
                                    const Marking& m) {
  return char_ratio<R>(rs, lambda, m) * Cx<R>(weyl_dim_real<R>(rs, lambda));
}

// Independent route: the Weyl character formula at a regular class. Rejects
// mu lying on any affine wall (alpha . mu integral).
template <class R> Cx<R> char_value_regular(const lie::RootSystem& rs,
                                            const lie::Weight& lambda,
                                            const lie::Weight& mu) {
  if (!rs.is_dominant_integral(lambda))
    throw std::invalid_argument("char_value requires dominant integral lambda");
  RatVec mu_root = rs.weight_root_coords(mu);
  R denom_prod(1);
  for (int i = 0; i < rs.n_plus(); ++i) {
    Rat am = rs.root_dot_basic(i, mu);
    if (am.is_integer())
      throw std::domain_error(
          "regular-point character formula needs alpha . mu nonintegral");
    denom_prod = denom_prod * (R(2) * sin_pi<R>(am));
  }
  lie::Weight lr(lambda);
  for (auto& k : lr) k += Rat(1);
  RatVec lr_root = rs.weight_root_coords(lr);
  Cx<R> num;
  for (const auto& w : rs.weyl_elements()) {
    RatVec x = rs.apply_weyl_root(w, lr_root);
    Cx<R> ph = unit_phase<R>(rs.inner_rr_basic(x, mu_root));
    num += w.parity > 0 ? ph : -ph;
  }
  // denominator (2i)^{n+} prod sin
  Cx<R> den = i_power<R>(rs.n_plus()) * Cx<R>(denom_prod);
  return num / den;
}

} // namespace witten::rep
