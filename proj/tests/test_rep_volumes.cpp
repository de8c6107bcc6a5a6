#include <doctest.h>

#include "witten/oracles.hpp"
#include "witten/rep_volumes.hpp"

#include <cmath>
#include <random>

using namespace witten;
using namespace witten::lie;
using namespace witten::rep;

namespace {
const double kPi = 3.14159265358979323846;

double mod_err(Cx<double> a, Cx<double> b) {
  double scale = std::max({1.0, cx_abs(a), cx_abs(b)});
  return cx_abs(a - b) / scale;
}
} // namespace

TEST_CASE("weyl_dim closed forms") {
  RootSystem a1(SimpleType::A, 1);
  for (int k = 0; k <= 6; ++k)
    CHECK(weyl_dim(a1, Weight{Rat(k)}).as_u64() == std::uint64_t(k + 1));

  RootSystem a2(SimpleType::A, 2);
  CHECK(weyl_dim(a2, Weight{Rat(0), Rat(0)}).as_u64() == 1);
  CHECK(weyl_dim(a2, Weight{Rat(1), Rat(1)}).as_u64() == 8); // adjoint
  CHECK(weyl_dim(a2, Weight{Rat(1), Rat(0)}).as_u64() == 3);

  RootSystem g2(SimpleType::G, 2);
  CHECK(weyl_dim(g2, Weight{Rat(1), Rat(0)}).as_u64() == 7);
  CHECK(weyl_dim(g2, Weight{Rat(0), Rat(1)}).as_u64() == 14); // adjoint

  RootSystem e8(SimpleType::E, 8);
  Weight adj(8, Rat(0));
  adj[7] = Rat(1); // highest root is the fundamental weight on node 8
  CHECK(weyl_dim(e8, adj).as_u64() == 248);

  CHECK_THROWS_AS(weyl_dim(a1, Weight{Rat(-1)}), std::invalid_argument);
  CHECK_THROWS_AS(weyl_dim(a1, Weight{Rat(1, 2)}), std::invalid_argument);
}

TEST_CASE("fundamental representation dimensions pin down every type table") {
  auto dim_of = [](const RootSystem& rs, int node) {
    Weight w(rs.rank(), Rat(0));
    w[node] = Rat(1);
    return rep::weyl_dim(rs, w).as_u64();
  };
  RootSystem b2(SimpleType::B, 2);
  CHECK(dim_of(b2, 0) == 5);  // vector
  CHECK(dim_of(b2, 1) == 4);  // spinor
  RootSystem b3(SimpleType::B, 3);
  CHECK(dim_of(b3, 0) == 7);
  CHECK(dim_of(b3, 1) == 21); // adjoint
  CHECK(dim_of(b3, 2) == 8);  // spinor
  RootSystem c3(SimpleType::C, 3);
  CHECK(dim_of(c3, 0) == 6);  // defining
  CHECK(dim_of(c3, 1) == 14);
  CHECK(dim_of(c3, 2) == 14);
  RootSystem d4(SimpleType::D, 4);
  CHECK(dim_of(d4, 0) == 8);  // vector
  CHECK(dim_of(d4, 1) == 28); // adjoint
  CHECK(dim_of(d4, 2) == 8);  // half-spinors
  CHECK(dim_of(d4, 3) == 8);
  RootSystem a5(SimpleType::A, 5);
  CHECK(dim_of(a5, 0) == 6);
  CHECK(dim_of(a5, 1) == 15);
  CHECK(dim_of(a5, 2) == 20);
  RootSystem e6(SimpleType::E, 6);
  CHECK(dim_of(e6, 0) == 27);
  CHECK(dim_of(e6, 1) == 78); // adjoint at the branch node
  CHECK(dim_of(e6, 5) == 27);
  RootSystem e7(SimpleType::E, 7);
  CHECK(dim_of(e7, 0) == 133); // adjoint
  CHECK(dim_of(e7, 6) == 56);
  RootSystem f4(SimpleType::F, 4);
  CHECK(dim_of(f4, 0) == 52); // adjoint at the long end
  CHECK(dim_of(f4, 3) == 26);
}

TEST_CASE("Weyl enumeration counts on D4 and E6") {
  RootSystem d4(SimpleType::D, 4);
  CHECK(d4.weyl_elements().size() == 192);
  RootSystem e6(SimpleType::E, 6);
  CHECK(e6.weyl_elements().size() == 51840);
}

TEST_CASE("volumes of G/T, K/T, G") {
  RootSystem a1(SimpleType::A, 1);
  CHECK(vol_g_over_t<double>(a1) == doctest::Approx(1.0 / (2 * kPi)));
  CHECK(vol_g<double>(a1) ==
        doctest::Approx(std::sqrt(2.0) / (2 * kPi)).epsilon(1e-14));

  RootSystem a2(SimpleType::A, 2);
  CHECK(vol_g_over_t<double>(a2) ==
        doctest::Approx(1.0 / (16 * kPi * kPi * kPi)).epsilon(1e-14));
  CHECK(vol_g<double>(a2) ==
        doctest::Approx(std::sqrt(3.0) / (16 * kPi * kPi * kPi))
            .epsilon(1e-14));

  // K = T and K = G limits
  CHECK(vol_g_over_k<double>(a2, {}) ==
        doctest::Approx(vol_g_over_t<double>(a2)));
  std::vector<int> all{0, 1, 2};
  CHECK(vol_g_over_k<double>(a2, all) == doctest::Approx(1.0).epsilon(1e-14));

  // K from one simple root: vol_{G/K} = vol_{G/T} * 2 pi (alpha.rho_K = 1)
  int idx = a2.find_root({1, 0});
  CHECK(vol_g_over_k<double>(a2, {idx}) ==
        doctest::Approx(2 * kPi * vol_g_over_t<double>(a2)).epsilon(1e-14));
}

TEST_CASE("scale dependence is the consistent one") {
  // Lattice data fixed, Gram scaled: alpha.rho scales linearly with the
  // scale, covolume as scale^{rank/2}.
  RootSystem s4(SimpleType::A, 1, Rat(4));
  CHECK(vol_g_over_t<double>(s4) == doctest::Approx(1.0 / (8 * kPi)));
  CHECK(lattice_covolume<double>(s4) ==
        doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(vol_g<double>(s4) ==
        doctest::Approx(2 * std::sqrt(2.0) / (8 * kPi)).epsilon(1e-14));
}

TEST_CASE("coadjoint orbit volumes") {
  RootSystem a1(SimpleType::A, 1);
  CHECK(vol_coadjoint_orbit<double>(a1, Weight{Rat(0)}) == doctest::Approx(1.0));
  // mu = rho: 2 pi * (alpha.rho = 1) * vol_{G/T} = 1
  CHECK(vol_coadjoint_orbit<double>(a1, a1.rho()) ==
        doctest::Approx(1.0).epsilon(1e-14));
  Weight two_rho{Rat(2)};
  CHECK(vol_coadjoint_orbit<double>(a1, two_rho) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("conjugacy class volumes") {
  RootSystem a1(SimpleType::A, 1);
  Marking trivial = Marking::trivial(a1);
  CHECK(vol_conjugacy_class<double>(a1, trivial) == doctest::Approx(1.0));

  // alpha.mu = 1/2: Vol = 2 sin(pi/2) vol_{G/T} = 1/pi
  Marking half = Marking::make(a1, Weight{Rat(1, 2)},
                               RatPoly::constant(1, Rat(1)));
  CHECK(vol_conjugacy_class<double>(a1, half) ==
        doctest::Approx(1.0 / kPi).epsilon(1e-14));

  // central class: K = G, empty sine product
  Marking central = Marking::make(a1, Weight{Rat(1)},
                                  RatPoly::constant(1, Rat(1)));
  CHECK(central.k_roots.size() == 1);
  CHECK(vol_conjugacy_class<double>(a1, central) == doctest::Approx(1.0));
  CHECK(central.sign_exponent == 1); // 2 mu rho_K = alpha.mu = 1
}

TEST_CASE("char_ratio closed form on A1") {
  RootSystem a1(SimpleType::A, 1);
  RatPoly one = RatPoly::constant(1, Rat(1));
  for (auto u : {Rat(1, 3), Rat(1, 4), Rat(2, 5)}) {
    Marking m = Marking::make(a1, Weight{u}, one); // alpha.mu = u
    for (int k = 0; k <= 7; ++k) {
      Cx<double> r = char_ratio<double>(a1, Weight{Rat(k)}, m);
      double expect = std::sin((k + 1) * kPi * u.to_double()) /
                      ((k + 1) * std::sin(kPi * u.to_double()));
      CHECK(std::abs(r.re - expect) < 1e-13);
      CHECK(std::abs(r.im) < 1e-13);
    }
  }
}

TEST_CASE("char_ratio trivialities") {
  RootSystem a2(SimpleType::A, 2);
  RatPoly one = RatPoly::constant(2, Rat(1));
  Marking trivial = Marking::trivial(a2);
  Weight lam{Rat(2), Rat(1)};
  CHECK(mod_err(char_ratio<double>(a2, lam, trivial), Cx<double>(1.0)) < 1e-13);
  Marking m = Marking::make(a2, Weight{Rat(1, 3), Rat(1, 5)}, one);
  CHECK(mod_err(char_ratio<double>(a2, Weight{Rat(0), Rat(0)}, m),
                Cx<double>(1.0)) < 1e-13);
}

TEST_CASE("char at a central element has modulus dim") {
  RootSystem a2(SimpleType::A, 2);
  RatPoly one = RatPoly::constant(2, Rat(1));
  Marking central = Marking::make(a2, Weight{Rat(1), Rat(0)}, one);
  REQUIRE(central.k_roots.size() == 3); // K = G
  Weight lam{Rat(1), Rat(0)};
  Cx<double> c = char_value<double>(a2, lam, central);
  CHECK(cx_abs(c) == doctest::Approx(3.0).epsilon(1e-13));
  // central phase e^{2 pi i lambda . mu}
  Rat phase = a2.inner_rr_basic(a2.weight_root_coords(lam),
                                a2.weight_root_coords(central.mu));
  Cx<double> expect = unit_phase<double>(phase) * Cx<double>(3.0);
  CHECK(mod_err(c, expect) < 1e-13);
}

TEST_CASE("Lemma path agrees with the regular Weyl character formula") {
  std::mt19937 rng(2024);
  for (auto [t, n] : {std::pair{SimpleType::A, 1}, {SimpleType::A, 2},
                      {SimpleType::B, 2}, {SimpleType::G, 2}}) {
    RootSystem rs(t, n);
    RatPoly one = RatPoly::constant(n, Rat(1));
    std::uniform_int_distribution<int> lam_c(0, 4);
    std::uniform_int_distribution<int> num(1, 6);
    int done = 0;
    while (done < 25) {
      Weight lam(n), mu(n);
      for (int i = 0; i < n; ++i) lam[i] = Rat(lam_c(rng));
      for (int i = 0; i < n; ++i) mu[i] = Rat(num(rng), 97); // alcove-ish
      if (!rs.in_closed_alcove(mu)) continue;
      if (!rs.stabilizer_roots(mu).empty()) continue; // want regular
      Marking m = Marking::make(rs, mu, one);
      Cx<double> a = char_value<double>(rs, lam, m);
      Cx<double> b = char_value_regular<double>(rs, lam, mu);
      CAPTURE(rs.label());
      CHECK(mod_err(a, b) < 1e-10);
      // character bound
      double dim = weyl_dim(rs, lam).to_double();
      CHECK(cx_abs(a) <= dim * (1 + 1e-10));
      ++done;
    }
  }
}

TEST_CASE("char_value conjugation symmetry") {
  RootSystem b2(SimpleType::B, 2);
  RatPoly one = RatPoly::constant(2, Rat(1));
  Marking m = Marking::make(b2, Weight{Rat(1, 5), Rat(1, 7)}, one);
  Weight lam{Rat(2), Rat(1)};
  Cx<double> v = char_value<double>(b2, lam, m);
  // chi_lambda(exp(-mu)) = conj(chi_lambda(exp mu)); -mu is in the orbit of
  // some alcove point; instead check via the regular formula directly.
  Cx<double> direct = char_value_regular<double>(b2, lam, m.mu);
  CHECK(mod_err(v, direct) < 1e-12);
  // regular path rejects singular mu
  CHECK_THROWS_AS(char_value_regular<double>(b2, lam, Weight{Rat(0), Rat(0)}),
                  std::domain_error);
}

TEST_CASE("weyl dimension identity against vol_{G/T}") {
  std::mt19937 rng(77);
  for (auto [t, n] : {std::pair{SimpleType::A, 1}, {SimpleType::A, 2},
                      {SimpleType::B, 2}, {SimpleType::G, 2}}) {
    RootSystem rs(t, n);
    std::uniform_int_distribution<int> lam_c(0, 9);
    for (int rep = 0; rep < 25; ++rep) {
      Weight lam(n);
      for (int i = 0; i < n; ++i) lam[i] = Rat(lam_c(rng));
      Weight lr = lam;
      for (auto& c : lr) c += Rat(1);
      double lhs = 1.0;
      for (int i = 0; i < rs.n_plus(); ++i)
        lhs *= rs.root_dot(i, lr).to_double();
      double rhs = std::pow(2 * kPi, -rs.n_plus()) *
                   weyl_dim(rs, lam).to_double() / vol_g_over_t<double>(rs);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
  }
}

TEST_CASE("marking validation") {
  RootSystem a2(SimpleType::A, 2);
  // non-invariant Q for a marking with K containing a root
  RatPoly x1 = RatPoly::variable(2, 0);
  CHECK_THROWS_AS(Marking::make(a2, Weight{Rat(0), Rat(0)}, x1),
                  std::invalid_argument);
  // Q = casimir is always invariant
  Marking ok = Marking::make(a2, Weight{Rat(0), Rat(0)}, casimir_poly(a2));
  CHECK(ok.k_roots.size() == 3);
}
