#include <doctest.h>

#include "witten/super_series.hpp"

#include <random>

using namespace witten;
using namespace witten::series;

using S = SuperSeries<double>;
using C = Cx<double>;

namespace {

TablePtr t_de2(int d = 4) { return make_table({"delta1"}, {"eps1", "eps2"}, d); }

S rand_series(const TablePtr& t, std::mt19937& rng, bool odd_too = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  S s(t);
  std::uniform_int_distribution<int> pick_e(0, 2);
  for (int tries = 0; tries < 12; ++tries) {
    Monomial m;
    m.even.assign(t->even_names.size(), 0);
    for (std::size_t i = 0; i < m.even.size(); ++i)
      m.even[i] = static_cast<std::uint8_t>(pick_e(rng));
    if (odd_too && !t->odd_names.empty()) {
      std::uniform_int_distribution<int> pick_o(
          0, (1 << t->odd_names.size()) - 1);
      m.odd = static_cast<std::uint64_t>(pick_o(rng));
    }
    if (m.degree() > t->truncation) continue;
    s.add_to(m, C(u(rng), u(rng)));
  }
  return s;
}

} // namespace

TEST_CASE("anticommutation and nilpotency") {
  auto t = t_de2();
  S e1 = S::odd_generator(t, 0);
  S e2 = S::odd_generator(t, 1);
  CHECK(max_coef_diff(e1 * e2, -(e2 * e1)) == 0.0);
  CHECK((e1 * e1).is_zero());
  Monomial m12 = e1.unit_monomial();
  m12.odd = 0b11;
  CHECK((e1 * e2).coefficient(m12) == C(1.0));
  CHECK((e2 * e1).coefficient(m12) == C(-1.0));
}

TEST_CASE("geometric series truncation") {
  auto t = make_table({"delta"}, {}, 2);
  S one = S::one(t);
  S d = S::even_generator(t, 0);
  S a = one + d;
  S b = one - d + d * d;
  CHECK(max_coef_diff(a * b, one) == 0.0); // exactly 1 at D=2
}

TEST_CASE("exp of even nilpotent and Taylor") {
  auto t = t_de2(3);
  S e1 = S::odd_generator(t, 0);
  S e2 = S::odd_generator(t, 1);
  S x = e1 * e2;
  S ex = series::exp(x);
  CHECK(max_coef_diff(ex, S::one(t) + x) == 0.0); // (e1 e2)^2 = 0

  S d = S::even_generator(t, 0);
  S ed = series::exp(d);
  Monomial m = d.unit_monomial();
  CHECK(ed.coefficient(m) == C(1.0));
  m.even[0] = 1;
  CHECK(ed.coefficient(m) == C(1.0));
  m.even[0] = 2;
  CHECK(ed.coefficient(m).re == doctest::Approx(0.5).epsilon(1e-15));
  m.even[0] = 3;
  CHECK(ed.coefficient(m).re == doctest::Approx(1.0 / 6).epsilon(1e-15));

  CHECK(series::exp(S(t)).coefficient(d.unit_monomial()) == C(1.0));
  CHECK_THROWS_AS(series::exp(S::one(t)), std::domain_error);
}

TEST_CASE("invert and sqrt") {
  auto t = make_table({"delta"}, {}, 2);
  S one = S::one(t);
  S d = S::even_generator(t, 0);

  S inv = invert(one + d);
  CHECK(max_coef_diff(inv, one - d + d * d) == 0.0);

  CHECK(max_coef_diff(sqrt(one), one) == 0.0);

  S r = sqrt(one + C(2.0) * d);
  // 1 + delta - delta^2/2
  Monomial m = one.unit_monomial();
  CHECK(r.coefficient(m).re == doctest::Approx(1.0));
  m.even[0] = 1;
  CHECK(r.coefficient(m).re == doctest::Approx(1.0));
  m.even[0] = 2;
  CHECK(r.coefficient(m).re == doctest::Approx(-0.5));
  CHECK(max_coef_diff(r * r, one + C(2.0) * d) < 1e-15);

  CHECK_THROWS_AS(invert(S(t)), std::domain_error);
  CHECK_THROWS_AS(sqrt(-one), std::domain_error);
}

TEST_CASE("coefficient accessor") {
  auto t = t_de2(4);
  S e1 = S::odd_generator(t, 0);
  S e2 = S::odd_generator(t, 1);
  S x = series::exp(e1 * e2);
  Monomial m12 = x.unit_monomial();
  m12.odd = 0b11;
  CHECK(x.coefficient(m12) == C(1.0));

  S one = S::one(t);
  Monomial md = one.unit_monomial();
  md.even[0] = 1;
  CHECK(one.coefficient(md) == C(0.0));

  auto t2 = make_table({"delta"}, {}, 4);
  S d = S::even_generator(t2, 0);
  S cube = (S::one(t2) + d) * (S::one(t2) + d) * (S::one(t2) + d);
  Monomial m2 = d.unit_monomial();
  m2.even[0] = 2;
  CHECK(cube.coefficient(m2).re == doctest::Approx(3.0));

  Monomial big = d.unit_monomial();
  big.even[0] = 5;
  CHECK_THROWS_AS(cube.coefficient(big), std::out_of_range);

  CHECK_THROWS_AS(d + S::one(t), std::invalid_argument); // table mismatch
}

TEST_CASE("associativity and graded commutativity on random triples") {
  auto t = make_table({"d1", "d2"}, {"e1", "e2", "e3"}, 4);
  std::mt19937 rng(1234);
  for (int rep = 0; rep < 20; ++rep) {
    S a = rand_series(t, rng);
    S b = rand_series(t, rng);
    S c = rand_series(t, rng);
    CHECK(max_coef_diff((a * b) * c, a * (b * c)) < 1e-13);
    // graded commutativity: even series commute with everything
    S ae = rand_series(t, rng, /*odd_too=*/false);
    CHECK(max_coef_diff(ae * b, b * ae) < 1e-14);
  }
}

TEST_CASE("exp(a) exp(-a) = 1 for augmentation-zero a") {
  auto t = make_table({"d1", "d2"}, {"e1", "e2"}, 4);
  std::mt19937 rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    S a = rand_series(t, rng);
    a.set(a.unit_monomial(), C(0.0)); // kill constant term
    S prod = series::exp(a) * series::exp(-a);
    CHECK(max_coef_diff(prod, S::one(t)) < 1e-12);
  }
}

TEST_CASE("invert is an involution; sqrt squares back") {
  auto t = make_table({"d1", "d2"}, {}, 4);
  std::mt19937 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    S a = rand_series(t, rng);
    a.set(a.unit_monomial(), C(1.3, -0.2)); // invertible constant
    CHECK(max_coef_diff(invert(invert(a)), a) < 1e-12);
    S p = rand_series(t, rng);
    p.set(p.unit_monomial(), C(0.0));
    S b = S::one(t) * C(2.0) + p; // positive real constant
    CHECK(max_coef_diff(sqrt(b) * sqrt(b), b) < 1e-12);
  }
}

TEST_CASE("series matrices: identity, diagonal, multiply-back") {
  auto t = make_table({"delta"}, {}, 3);
  using M = SeriesMatrix<double>;
  S one = S::one(t);
  S d = S::even_generator(t, 0);

  M id = M::identity(t, 2);
  CHECK(max_coef_diff(matrix_det(id), one) == 0.0);
  M idinv = matrix_inverse(id);
  CHECK(max_coef_diff(idinv(0, 0), one) == 0.0);
  CHECK(idinv(0, 1).is_zero());

  M diag(t, 2);
  diag(0, 0) = one + d;
  diag(1, 1) = one;
  CHECK(max_coef_diff(matrix_det(diag), one + d) < 1e-15);
  M dinv = matrix_inverse(diag);
  CHECK(max_coef_diff(dinv(0, 0), one - d + d * d - d * d * d) < 1e-14);

  M m(t, 2);
  m(0, 0) = one;
  m(1, 1) = one;
  m(0, 1) = d;
  m(1, 0) = d * C(0.5);
  M prod = matrix_inverse(m) * m;
  CHECK(max_coef_diff(prod(0, 0), one) < 1e-13);
  CHECK(max_coef_diff(prod(1, 1), one) < 1e-13);
  CHECK(prod(0, 1).is_zero());

  // odd entries rejected
  auto t2 = t_de2();
  M bad(t2, 1);
  bad(0, 0) = S::odd_generator(t2, 0);
  CHECK_THROWS_AS(matrix_det(bad), std::domain_error);
}

TEST_CASE("monomial keys and parsing") {
  auto t = make_table({"delta1", "sigma1"}, {"eps1_1(1)", "eps1_1(2)"}, 5);
  Monomial m;
  m.even = {2, 0};
  m.odd = 0b11;
  std::string key = monomial_key(*t, m);
  CHECK(key == "delta1^2*eps1_1(1)*eps1_1(2)");
  CHECK(monomial_parse(*t, key) == m);
  Monomial one;
  one.even = {0, 0};
  CHECK(monomial_key(*t, one) == "1");
  CHECK(monomial_parse(*t, "1") == one);
  CHECK_THROWS_AS(monomial_parse(*t, "nope"), std::invalid_argument);
  CHECK_THROWS_AS(monomial_parse(*t, "eps1_1(1)*eps1_1(1)"),
                  std::invalid_argument);
}
