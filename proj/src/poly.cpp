#include "witten/poly.hpp"

#include <cctype>
#include <sstream>

namespace witten {

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
  RatPoly out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) {
  RatPoly out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
  return out;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  RatPoly out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      RatPoly::Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  return out;
}

RatPoly operator*(const RatPoly& a, const Rat& s) {
  RatPoly out(a.nvars_);
  if (s.is_zero()) return out;
  for (const auto& [e, c] : a.terms_) out.terms_[e] = c * s;
  return out;
}

RatPoly RatPoly::derivative(int var) const {
  RatPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exps d = e;
    d[var] -= 1;
    out.add_term(d, c * Rat(e[var]));
  }
  return out;
}

RatPoly RatPoly::compose_linear(const RatMat& m) const {
  // Substitute x_i -> sum_j m(i,j) x_j by repeated multiplication.
  std::vector<RatPoly> lin(nvars_, RatPoly(nvars_));
  for (int i = 0; i < nvars_; ++i)
    for (int j = 0; j < nvars_; ++j)
      if (!m(i, j).is_zero())
        lin[i] = lin[i] + RatPoly::variable(nvars_, j, m(i, j));
  RatPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    RatPoly term = RatPoly::constant(nvars_, c);
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) term = term * lin[i];
    out = out + term;
  }
  return out;
}

Rat RatPoly::eval(const RatVec& x) const {
  Rat acc;
  for (const auto& [e, c] : terms_) {
    Rat t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    acc += t;
  }
  return acc;
}

double RatPoly::eval_double(const std::vector<double>& x) const {
  double acc = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.to_double();
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    acc += t;
  }
  return acc;
}

std::string RatPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      os << "*x" << i + 1;
      if (e[i] > 1) os << "^" << int(e[i]);
    }
  }
  return os.str();
}

namespace {

struct PolyParser {
  const std::string& s;
  std::size_t pos = 0;
  int nvars;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("polynomial parse error at position " +
                                std::to_string(pos) + " in '" + s + "': " +
                                why);
  }

  long long read_uint() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected a number");
    long long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > INT32_MAX) fail("number too large");
      ++pos;
    }
    return v;
  }

  Rat read_rational() {
    long long num = read_uint();
    skip_ws();
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      long long den = read_uint();
      if (den == 0) fail("zero denominator");
      return Rat(num, den);
    }
    return Rat(num);
  }

  // factor := rational | xK ['^' int]
  RatPoly read_factor() {
    skip_ws();
    if (pos >= s.size()) fail("expected a factor");
    if (s[pos] == 'x') {
      ++pos;
      long long idx = read_uint();
      if (idx < 1 || idx > nvars)
        fail("variable index out of range (have x1..x" +
             std::to_string(nvars) + ")");
      int e = 1;
      skip_ws();
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        e = static_cast<int>(read_uint());
        if (e > 60) fail("exponent too large");
      }
      RatPoly p = RatPoly::constant(nvars, Rat(1));
      RatPoly v = RatPoly::variable(nvars, static_cast<int>(idx) - 1);
      for (int k = 0; k < e; ++k) p = p * v;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(s[pos])))
      return RatPoly::constant(nvars, read_rational());
    fail("expected rational or variable");
  }

  RatPoly read_term() {
    RatPoly p = read_factor();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        p = p * read_factor();
      } else {
        return p;
      }
    }
  }

  RatPoly parse() {
    RatPoly acc(nvars);
    skip_ws();
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      neg = s[pos] == '-';
      ++pos;
    }
    while (true) {
      RatPoly t = read_term();
      acc = neg ? acc - t : acc + t;
      skip_ws();
      if (pos >= s.size()) return acc;
      if (s[pos] == '+') { neg = false; ++pos; }
      else if (s[pos] == '-') { neg = true; ++pos; }
      else fail("expected '+', '-' or end of input");
    }
  }
};

} // namespace

RatPoly RatPoly::parse(const std::string& text, int nvars) {
  PolyParser p{text, 0, nvars};
  return p.parse();
}

RatPoly casimir_poly(const lie::RootSystem& rs) {
  int n = rs.rank();
  RatPoly p(n);
  const RatMat& g = rs.gram();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (g(i, j).is_zero()) continue;
      RatPoly::Exps e(n, 0);
      e[i] += 1;
      e[j] += 1;
      p.add_term(e, g(i, j) / Rat(2));
    }
  return p;
}

RatPoly power_sum_poly(const lie::RootSystem& rs, int k) {
  if (rs.type() != lie::SimpleType::A)
    throw std::invalid_argument("power_sum is defined for type A only");
  if (k < 1 || k > 32)
    throw std::invalid_argument("power_sum order out of range");
  int n = rs.rank();
  // Defining weights eps_1 = omega_1, eps_{i+1} = eps_i - alpha_i; a weight
  // acts on xi = sum x_j alpha_j through the basic form.
  RatVec eps = rs.weight_root_coords(
      [&] { lie::Weight w(n, Rat(0)); w[0] = Rat(1); return w; }());
  RatPoly total(n);
  for (int i = 0; i <= n; ++i) {
    RatPoly lin(n);
    for (int j = 0; j < n; ++j) {
      RatVec alpha_j(n, Rat(0));
      alpha_j[j] = Rat(1);
      Rat c = rs.inner_rr_basic(eps, alpha_j);
      if (!c.is_zero()) lin = lin + RatPoly::variable(n, j, c);
    }
    RatPoly pk = RatPoly::constant(n, Rat(1));
    for (int t = 0; t < k; ++t) pk = pk * lin;
    total = total + pk;
    if (i < n) { // eps -> eps - alpha_i
      RatVec alpha_i(n, Rat(0));
      alpha_i[i] = Rat(1);
      for (int j = 0; j < n; ++j) eps[j] -= alpha_i[j];
    }
  }
  return total;
}

RatPoly poly_from_spec(const lie::RootSystem& rs, const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t == "casimir") return casimir_poly(rs);
  if (t.rfind("power_sum(", 0) == 0 && t.back() == ')') {
    std::string arg = t.substr(10, t.size() - 11);
    return power_sum_poly(rs, std::stoi(arg));
  }
  return RatPoly::parse(text, rs.rank());
}

bool is_invariant(const lie::RootSystem& rs, const RatPoly& p,
                  const std::vector<int>& k_roots) {
  std::vector<int> gens;
  if (k_roots.empty()) {
    // full W: simple reflections; the simple roots are the first rank
    // entries only by coincidence, so locate them explicitly.
    for (int i = 0; i < rs.rank(); ++i) {
      lie::RootCoords e(rs.rank(), 0);
      e[i] = 1;
      gens.push_back(rs.find_root(e));
    }
  } else {
    gens = rs.subsystem_simples(k_roots);
  }
  for (int g : gens) {
    RatMat refl = rs.reflection_matrix(g);
    if (!(p.compose_linear(refl) == p)) return false;
  }
  return true;
}

} // namespace witten
