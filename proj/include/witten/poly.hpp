// Exact multivariate polynomials on the Cartan subalgebra, in simple-root
// coordinates x1..xr with rational coefficients. These carry the invariant
// deformation polynomials and the marking insertions.
#pragma once

#include "witten/linalg.hpp"
#include "witten/rational.hpp"
#include "witten/root_system.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace witten {

class RatPoly {
public:
  using Exps = std::vector<std::uint8_t>;

  RatPoly() : nvars_(0) {}
  explicit RatPoly(int nvars) : nvars_(nvars) {}

  static RatPoly constant(int nvars, const Rat& c) {
    RatPoly p(nvars);
    if (!c.is_zero()) p.terms_[Exps(nvars, 0)] = c;
    return p;
  }
  static RatPoly variable(int nvars, int i, const Rat& coef = Rat(1)) {
    RatPoly p(nvars);
    Exps e(nvars, 0);
    e[i] = 1;
    if (!coef.is_zero()) p.terms_[e] = coef;
    return p;
  }

  int nvars() const { return nvars_; }
  const std::map<Exps, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (auto v : e) t += v;
      if (t > d) d = t;
    }
    return d;
  }

  void add_term(const Exps& e, const Rat& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_[e] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const RatPoly& a, const Rat& s);

  RatPoly derivative(int var) const;

  // p(Mx) for a rational linear substitution.
  RatPoly compose_linear(const RatMat& m) const;

  Rat eval(const RatVec& x) const;
  double eval_double(const std::vector<double>& x) const;

  bool operator==(const RatPoly& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  std::string str() const;

  // Grammar: sum of terms, each a '*'-product of rational literals and
  // powers xK^e. Example: "x1^3 + 1/2*x1*x2^2 - 3".
  static RatPoly parse(const std::string& text, int nvars);

private:
  int nvars_;
  std::map<Exps, Rat> terms_;
};

// 1/2 ||xi||^2 in the scaled metric.
RatPoly casimir_poly(const lie::RootSystem& rs);

// Power sums of the defining-representation weights; type A only.
RatPoly power_sum_poly(const lie::RootSystem& rs, int k);

// Named generator or literal polynomial: "casimir", "power_sum(k)", or the
// parse grammar above.
RatPoly poly_from_spec(const lie::RootSystem& rs, const std::string& text);

// Exact invariance of p under the reflections generating W (k_roots empty)
// or W_K (reflections in the subsystem's simple roots).
bool is_invariant(const lie::RootSystem& rs, const RatPoly& p,
                  const std::vector<int>& k_roots);

} // namespace witten
