#include "witten/root_system.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <set>

namespace witten::lie {

namespace {

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct TypeTable {
  int dim;
  long long weyl;
  int center;
};

TypeTable type_table(SimpleType t, int n) {
  switch (t) {
    case SimpleType::A:
      return {n * (n + 2), factorial(n + 1), n + 1};
    case SimpleType::B:
    case SimpleType::C:
      return {n * (2 * n + 1), (1LL << n) * factorial(n), 2};
    case SimpleType::D:
      return {n * (2 * n - 1), (1LL << (n - 1)) * factorial(n), 4};
    case SimpleType::E:
      if (n == 6) return {78, 51840LL, 3};
      if (n == 7) return {133, 2903040LL, 2};
      return {248, 696729600LL, 1};
    case SimpleType::F:
      return {52, 1152LL, 1};
    case SimpleType::G:
      return {14, 12LL, 1};
  }
  throw std::invalid_argument("unreachable type");
}

void check_type_rank(SimpleType t, int n) {
  bool ok = false;
  switch (t) {
    case SimpleType::A: ok = n >= 1 && n <= 8; break;
    case SimpleType::B: ok = n >= 2 && n <= 8; break;
    case SimpleType::C: ok = n >= 2 && n <= 8; break;
    case SimpleType::D: ok = n >= 4 && n <= 8; break;
    case SimpleType::E: ok = n >= 6 && n <= 8; break;
    case SimpleType::F: ok = n == 4; break;
    case SimpleType::G: ok = n == 2; break;
  }
  if (!ok)
    throw std::invalid_argument("invalid simple type/rank combination " +
                                std::string(1, static_cast<char>(t)) +
                                std::to_string(n));
}

} // namespace

SimpleType parse_type(char c) {
  switch (c) {
    case 'A': case 'B': case 'C': case 'D': case 'E': case 'F': case 'G':
      return static_cast<SimpleType>(c);
    default:
      throw std::invalid_argument(std::string("unknown simple type '") + c +
                                  "'");
  }
}

RootSystem::RootSystem(SimpleType type, int rank, Rat scale)
    : type_(type), rank_(rank), scale_(scale) {
  check_type_rank(type, rank);
  if (scale_.sign() <= 0)
    throw std::invalid_argument("inner-product scale must be positive");
  TypeTable tt = type_table(type, rank);
  dim_g_ = tt.dim;
  weyl_order_ = tt.weyl;
  center_order_ = tt.center;

  build_gram_basic();

  gram_ = gram_basic_;
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    for (std::size_t j = 0; j < gram_.cols(); ++j) gram_(i, j) *= scale_;

  d_basic_.resize(rank_);
  cartan_.assign(rank_, std::vector<int>(rank_));
  for (int j = 0; j < rank_; ++j) {
    d_basic_[j] = gram_basic_(j, j) / Rat(2);
    for (int i = 0; i < rank_; ++i) {
      Rat c = gram_basic_(i, j) / d_basic_[j];
      if (!c.is_integer())
        throw std::logic_error("non-integral Cartan entry");
      cartan_[i][j] = static_cast<int>(c.num());
    }
  }

  root_to_weight_ = RatMat(rank_, rank_);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      root_to_weight_(i, j) = Rat(cartan_[j][i]); // Cartan^T
  weight_to_root_ = root_to_weight_.inverse();

  gram_weight_ = weight_to_root_.transpose() * gram_ * weight_to_root_;
  gram_weight_basic_ =
      weight_to_root_.transpose() * gram_basic_ * weight_to_root_;

  rho_root_ = weight_to_root_.apply(RatVec(rank_, Rat(1)));

  build_positive_roots();

  int expected = (dim_g_ - rank_) / 2;
  if (n_plus() != expected)
    throw std::logic_error("positive root closure produced wrong count");
}

std::string RootSystem::label() const {
  return std::string(1, static_cast<char>(type_)) + std::to_string(rank_);
}

void RootSystem::build_gram_basic() {
  int n = rank_;
  gram_basic_ = RatMat(n, n);
  auto edge = [&](int i, int j, Rat v) {
    gram_basic_(i, j) = v;
    gram_basic_(j, i) = v;
  };
  switch (type_) {
    case SimpleType::A:
      for (int i = 0; i < n; ++i) gram_basic_(i, i) = Rat(2);
      for (int i = 0; i + 1 < n; ++i) edge(i, i + 1, Rat(-1));
      break;
    case SimpleType::B:
      // alpha_n is the short root.
      for (int i = 0; i < n; ++i) gram_basic_(i, i) = i == n - 1 ? Rat(1) : Rat(2);
      for (int i = 0; i + 1 < n; ++i) edge(i, i + 1, Rat(-1));
      break;
    case SimpleType::C:
      // alpha_n is the long root; the short roots have squared length 1.
      for (int i = 0; i < n; ++i) gram_basic_(i, i) = i == n - 1 ? Rat(2) : Rat(1);
      for (int i = 0; i + 2 < n; ++i) edge(i, i + 1, Rat(-1, 2));
      edge(n - 2, n - 1, Rat(-1));
      break;
    case SimpleType::D:
      for (int i = 0; i < n; ++i) gram_basic_(i, i) = Rat(2);
      for (int i = 0; i + 2 < n; ++i) edge(i, i + 1, Rat(-1));
      edge(n - 3, n - 2, Rat(-1));
      edge(n - 3, n - 1, Rat(-1));
      break;
    case SimpleType::E:
      // Bourbaki numbering: chain 1-3-4-5-6(-7-8), branch node 2 attached to 4.
      for (int i = 0; i < n; ++i) gram_basic_(i, i) = Rat(2);
      edge(0, 2, Rat(-1));
      edge(2, 3, Rat(-1));
      edge(3, 4, Rat(-1));
      edge(4, 5, Rat(-1));
      edge(1, 3, Rat(-1));
      if (n >= 7) edge(5, 6, Rat(-1));
      if (n >= 8) edge(6, 7, Rat(-1));
      break;
    case SimpleType::F:
      gram_basic_(0, 0) = Rat(2);
      gram_basic_(1, 1) = Rat(2);
      gram_basic_(2, 2) = Rat(1);
      gram_basic_(3, 3) = Rat(1);
      edge(0, 1, Rat(-1));
      edge(1, 2, Rat(-1));
      edge(2, 3, Rat(-1, 2));
      break;
    case SimpleType::G:
      // alpha_1 short (squared length 2/3), alpha_2 long.
      gram_basic_(0, 0) = Rat(2, 3);
      gram_basic_(1, 1) = Rat(2);
      edge(0, 1, Rat(-1));
      break;
  }
}

void RootSystem::build_positive_roots() {
  std::set<RootCoords> seen;
  std::vector<RootCoords> queue;
  for (int i = 0; i < rank_; ++i) {
    RootCoords e(rank_, 0);
    e[i] = 1;
    seen.insert(e);
    queue.push_back(e);
  }
  // Closure under simple reflections, keeping the positive cone.
  for (std::size_t q = 0; q < queue.size(); ++q) {
    RootCoords x = queue[q];
    for (int j = 0; j < rank_; ++j) {
      long pairing = 0;
      for (int i = 0; i < rank_; ++i) pairing += cartan_[i][j] * x[i];
      RootCoords y = x;
      y[j] -= static_cast<int>(pairing);
      if (!coords_positive(y)) continue;
      if (seen.insert(y).second) queue.push_back(y);
    }
  }
  positive_roots_.assign(seen.begin(), seen.end());
  std::sort(positive_roots_.begin(), positive_roots_.end(),
            [](const RootCoords& a, const RootCoords& b) {
              int ha = 0, hb = 0;
              for (int v : a) ha += v;
              for (int v : b) hb += v;
              if (ha != hb) return ha < hb;
              return a < b;
            });
  highest_root_ = static_cast<int>(positive_roots_.size()) - 1;
}

bool RootSystem::coords_positive(const RootCoords& x) {
  bool nonzero = false;
  for (int v : x) {
    if (v < 0) return false;
    if (v > 0) nonzero = true;
  }
  return nonzero;
}

int RootSystem::find_root(const RootCoords& x) const {
  for (std::size_t i = 0; i < positive_roots_.size(); ++i)
    if (positive_roots_[i] == x) return static_cast<int>(i);
  return -1;
}

Weight RootSystem::rho() const { return Weight(rank_, Rat(1)); }

RatVec RootSystem::weight_root_coords(const Weight& w) const {
  if (static_cast<int>(w.size()) != rank_)
    throw std::invalid_argument("weight has wrong rank");
  return weight_to_root_.apply(w);
}

Rat RootSystem::inner_weights(const Weight& a, const Weight& b) const {
  return form(gram_weight_, a, b);
}

Rat RootSystem::root_dot_basic(int root_index, const Weight& mu) const {
  const RootCoords& r = positive_roots_.at(root_index);
  RatVec x(rank_);
  for (int i = 0; i < rank_; ++i) x[i] = Rat(r[i]);
  return inner_rr_basic(x, weight_root_coords(mu));
}

Rat RootSystem::root_dot(int root_index, const Weight& lambda) const {
  const RootCoords& r = positive_roots_.at(root_index);
  RatVec x(rank_);
  for (int i = 0; i < rank_; ++i) x[i] = Rat(r[i]);
  return inner_rr(x, weight_root_coords(lambda));
}

bool RootSystem::is_dominant(const Weight& w) const {
  if (static_cast<int>(w.size()) != rank_) return false;
  for (const Rat& k : w)
    if (k.sign() < 0) return false;
  return true;
}

bool RootSystem::is_dominant_integral(const Weight& w) const {
  if (!is_dominant(w)) return false;
  for (const Rat& k : w)
    if (!k.is_integer()) return false;
  return true;
}

bool RootSystem::in_closed_alcove(const Weight& mu) const {
  if (!is_dominant(mu)) return false;
  return root_dot_basic(highest_root_, mu) <= Rat(1);
}

std::vector<int> RootSystem::stabilizer_roots(const Weight& mu) const {
  if (!in_closed_alcove(mu))
    throw std::domain_error("mu is not in the closed fundamental alcove");
  std::vector<int> out;
  for (int i = 0; i < n_plus(); ++i)
    if (root_dot_basic(i, mu).is_integer()) out.push_back(i);
  return out;
}

std::vector<int> RootSystem::zero_roots(const Weight& mu) const {
  std::vector<int> out;
  for (int i = 0; i < n_plus(); ++i)
    if (root_dot_basic(i, mu).is_zero()) out.push_back(i);
  return out;
}

void RootSystem::build_weyl_cache(long long budget) const {
  if (weyl_order_ > budget)
    throw WeylBudgetError("Weyl group of order " + std::to_string(weyl_order_) +
                          " exceeds enumeration budget " +
                          std::to_string(budget));
  int n = rank_;
  // Generator matrices (column-action on root coordinates).
  std::vector<std::vector<int>> gens(n, std::vector<int>(n * n, 0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) gens[j][i * n + i] = 1;
    for (int i = 0; i < n; ++i) gens[j][j * n + i] -= cartan_[i][j];
  }

  // Dedupe via the image of a scaled regular vector (rho cleared of
  // denominators); the action on a regular vector determines the element.
  RatVec rho_r = rho_root_;
  long long lcm = 1;
  for (const Rat& c : rho_r) lcm = std::lcm(lcm, c.den());
  std::vector<long long> rho_int(n);
  for (int i = 0; i < n; ++i) {
    Rat v = rho_r[i] * Rat(lcm);
    if (!v.is_integer()) throw std::logic_error("rho scaling failed");
    rho_int[i] = v.num();
  }

  auto key_of = [&](const std::array<std::int8_t, 64>& m) {
    std::vector<long long> img(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        img[i] += static_cast<long long>(m[i * n + j]) * rho_int[j];
    return img;
  };

  std::vector<WeylElement> elems;
  elems.reserve(static_cast<std::size_t>(weyl_order_));
  WeylElement id;
  for (int i = 0; i < n; ++i) id.mat[i * n + i] = 1;
  id.parity = 1;
  id.length = 0;
  elems.push_back(id);

  std::map<std::vector<long long>, int> seen;
  seen.emplace(key_of(id.mat), 0);

  for (std::size_t q = 0; q < elems.size(); ++q) {
    WeylElement w = elems[q]; // copy: elems may reallocate
    for (int g = 0; g < n; ++g) {
      WeylElement nw;
      // nw = gens[g] * w (left multiplication).
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          int acc = 0;
          for (int k = 0; k < n; ++k)
            acc += gens[g][i * n + k] * w.mat[k * n + j];
          if (acc < -127 || acc > 127)
            throw std::logic_error("Weyl matrix entry out of int8 range");
          nw.mat[i * n + j] = static_cast<std::int8_t>(acc);
        }
      nw.parity = static_cast<std::int8_t>(-w.parity);
      nw.length = static_cast<std::uint8_t>(w.length + 1);
      auto key = key_of(nw.mat);
      if (seen.emplace(std::move(key), 1).second) elems.push_back(nw);
    }
  }
  if (static_cast<long long>(elems.size()) != weyl_order_)
    throw std::logic_error("Weyl enumeration count mismatch for " + label());
  std::sort(elems.begin(), elems.end(),
            [n](const WeylElement& a, const WeylElement& b) {
              if (a.length != b.length) return a.length < b.length;
              return std::memcmp(a.mat.data(), b.mat.data(), n * n) < 0;
            });
  weyl_cache_ = std::move(elems);
}

namespace {
std::atomic<long long> g_weyl_budget{RootSystem::kDefaultWeylBudget};
}

long long default_weyl_budget() { return g_weyl_budget.load(); }
void set_default_weyl_budget(long long budget) { g_weyl_budget.store(budget); }

const std::vector<WeylElement>& RootSystem::weyl_elements(
    long long budget) const {
  if (budget <= 0) budget = default_weyl_budget();
  // call_once leaves the flag unset if the builder throws (budget errors),
  // so a later call with a larger budget retries.
  std::call_once(weyl_once_, [&] { build_weyl_cache(budget); });
  return weyl_cache_;
}

RatVec RootSystem::apply_weyl_root(const WeylElement& w, const RatVec& x) const {
  RatVec y(rank_);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      if (w.mat[i * rank_ + j] != 0)
        y[i] += Rat(w.mat[i * rank_ + j]) * x[j];
  return y;
}

RootCoords RootSystem::apply_weyl_int(const WeylElement& w,
                                      const RootCoords& x) const {
  RootCoords y(rank_, 0);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      y[i] += w.mat[i * rank_ + j] * x[j];
  return y;
}

Weight RootSystem::apply_weyl_weight(const WeylElement& w,
                                     const Weight& k) const {
  return root_to_weight_.apply(apply_weyl_root(w, weight_to_root_.apply(k)));
}

WeylElement RootSystem::weyl_inverse(const WeylElement& w) const {
  // Integer matrix with determinant +-1; invert by adjugate over rationals.
  RatMat m(rank_, rank_);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) m(i, j) = Rat(w.mat[i * rank_ + j]);
  RatMat inv = m.inverse();
  WeylElement out;
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) {
      if (!inv(i, j).is_integer())
        throw std::logic_error("Weyl inverse not integral");
      out.mat[i * rank_ + j] = static_cast<std::int8_t>(inv(i, j).num());
    }
  out.parity = w.parity;
  out.length = w.length;
  return out;
}

std::vector<int> RootSystem::subsystem_simples(
    const std::vector<int>& k_roots) const {
  std::set<RootCoords> in_k;
  for (int idx : k_roots) in_k.insert(positive_roots_.at(idx));
  // Closure check: alpha, beta in K, alpha+beta a root => alpha+beta in K.
  for (int a : k_roots)
    for (int b : k_roots) {
      RootCoords s = positive_roots_[a];
      const RootCoords& t = positive_roots_[b];
      for (int i = 0; i < rank_; ++i) s[i] += t[i];
      if (find_root(s) >= 0 && !in_k.count(s))
        throw std::invalid_argument(
            "K_roots is not closed under root addition");
    }
  std::vector<int> simples;
  for (int a : k_roots) {
    bool decomposable = false;
    for (int b : k_roots) {
      if (decomposable) break;
      for (int c : k_roots) {
        RootCoords s = positive_roots_[b];
        const RootCoords& t = positive_roots_[c];
        for (int i = 0; i < rank_; ++i) s[i] += t[i];
        if (s == positive_roots_[a]) { decomposable = true; break; }
      }
    }
    if (!decomposable) simples.push_back(a);
  }
  return simples;
}

std::vector<WeylElement> RootSystem::coset_representatives(
    const std::vector<int>& k_roots, long long budget) const {
  std::vector<int> simples = subsystem_simples(k_roots);
  const auto& all = weyl_elements(budget);
  std::vector<WeylElement> reps;
  for (const WeylElement& w : all) {
    bool minimal = true;
    for (int s : simples) {
      RootCoords img = apply_weyl_int(w, positive_roots_[s]);
      if (!coords_positive(img)) { minimal = false; break; }
    }
    if (minimal) reps.push_back(w);
  }
  return reps;
}

long long RootSystem::weyl_subgroup_order(
    const std::vector<int>& k_roots) const {
  // |W_K| via the coset count.
  auto reps = coset_representatives(k_roots);
  if (reps.empty() || weyl_order_ % static_cast<long long>(reps.size()) != 0)
    throw std::logic_error("coset representative count does not divide |W|");
  return weyl_order_ / static_cast<long long>(reps.size());
}

namespace {

// floor(sqrt(r)) for a nonnegative rational, as an integer bound.
long long floor_sqrt(const Rat& r) {
  if (r.sign() < 0) return -1;
  double guess = std::sqrt(r.to_double());
  long long g = static_cast<long long>(guess);
  while (Rat(g + 1) * Rat(g + 1) <= r) ++g;
  while (g > 0 && Rat(g) * Rat(g) > r) --g;
  return g;
}

} // namespace

std::vector<Weight> RootSystem::dominant_weights_in_ball(
    const Rat& radius2) const {
  std::vector<Weight> out;
  if (radius2.sign() <= 0) return out;
  // Box bound: k_i + 1 = <lambda+rho, alpha_i^vee> <= r ||alpha_i^vee||
  // (Cauchy-Schwarz in the scaled metric; the pairing itself is scale-free,
  // so the scale cancels between r^2 and the coroot norm).
  std::vector<long long> box(rank_);
  for (int i = 0; i < rank_; ++i) {
    RatVec coroot(rank_);
    coroot[i] = Rat(1) / d_basic_[i];
    Rat n2 = inner_rr_basic(coroot, coroot); // basic coroot norm^2
    Rat bound2 = radius2 / scale_ * n2;
    box[i] = floor_sqrt(bound2);
    if (box[i] < 0) return out;
  }
  long long cells = 1;
  for (int i = 0; i < rank_; ++i) {
    cells *= box[i] + 1;
    if (cells > 100'000'000LL)
      throw std::runtime_error("dominant weight enumeration box too large");
  }

  Weight lam(rank_, Rat(0));
  std::vector<std::pair<Rat, Weight>> keyed;
  std::vector<long long> k(rank_, 0);
  while (true) {
    Weight lam_rho(rank_);
    for (int i = 0; i < rank_; ++i) lam_rho[i] = Rat(k[i] + 1);
    Rat n2 = norm2_weight(lam_rho);
    if (n2 <= radius2) {
      Weight l(rank_);
      for (int i = 0; i < rank_; ++i) l[i] = Rat(k[i]);
      keyed.emplace_back(n2, std::move(l));
    }
    int pos = rank_ - 1;
    while (pos >= 0 && k[pos] == box[pos]) { k[pos] = 0; --pos; }
    if (pos < 0) break;
    ++k[pos];
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              for (std::size_t i = 0; i < a.second.size(); ++i) {
                if (a.second[i] != b.second[i]) return a.second[i] < b.second[i];
              }
              return false;
            });
  out.reserve(keyed.size());
  for (auto& kv : keyed) out.push_back(std::move(kv.second));
  return out;
}

RatMat RootSystem::reflection_matrix(int root_index) const {
  const RootCoords& beta = positive_roots_.at(root_index);
  RatVec b(rank_);
  for (int i = 0; i < rank_; ++i) b[i] = Rat(beta[i]);
  Rat beta2 = inner_rr_basic(b, b);
  RatMat m = RatMat::identity(rank_);
  // s_beta(x) = x - <x, beta^vee> beta
  for (int i = 0; i < rank_; ++i) {
    RatVec alpha_i(rank_, Rat(0));
    alpha_i[i] = Rat(1);
    Rat v = Rat(2) * inner_rr_basic(alpha_i, b) / beta2;
    if (v.is_zero()) continue;
    for (int r = 0; r < rank_; ++r) m(r, i) -= b[r] * v;
  }
  return m;
}

Rat RootSystem::covolume_sq() const {
  RatMat g(rank_, rank_);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      g(i, j) = gram_(i, j) / (d_basic_[i] * d_basic_[j]);
  return g.det();
}

} // namespace witten::lie
