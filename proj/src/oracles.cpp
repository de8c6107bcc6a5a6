#include "witten/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace witten::oracles {

namespace {

std::vector<long> to_long_coords(const lie::Weight& w) {
  std::vector<long> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].is_integer())
      throw std::invalid_argument("expected an integral weight");
    out[i] = w[i].num();
  }
  return out;
}

lie::Weight to_weight(const std::vector<long>& k) {
  lie::Weight w(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) w[i] = Rat(k[i]);
  return w;
}

// alpha_i in fundamental coordinates (column i of Cartan^T), integers.
std::vector<long> simple_root_fund(const lie::RootSystem& rs, int i) {
  std::vector<long> a(rs.rank());
  for (int r = 0; r < rs.rank(); ++r) a[r] = rs.cartan()[i][r];
  return a;
}

// Dominant representative of the Weyl orbit of nu (fund coords).
std::vector<long> dominantize(const lie::RootSystem& rs, std::vector<long> nu) {
  for (int guard = 0; guard < 100000; ++guard) {
    int neg = -1;
    for (int i = 0; i < rs.rank(); ++i)
      if (nu[i] < 0) { neg = i; break; }
    if (neg < 0) return nu;
    long c = nu[neg];
    std::vector<long> alpha = simple_root_fund(rs, neg);
    for (int i = 0; i < rs.rank(); ++i) nu[i] -= c * alpha[i];
  }
  throw std::logic_error("dominantize did not terminate");
}

} // namespace

std::vector<std::pair<std::vector<long>, long long>>
freudenthal_multiplicities(const lie::RootSystem& rs,
                           const lie::Weight& lambda, std::size_t budget) {
  if (!rs.is_dominant_integral(lambda))
    throw std::invalid_argument("freudenthal requires dominant integral lambda");
  lie::Weight lr(lambda);
  for (auto& k : lr) k += Rat(1);
  Rat lr_norm2 = rs.norm2_weight(lr);

  // Candidate support: dominant mu with ||mu+rho|| <= ||lambda+rho|| and
  // lambda - mu in the nonnegative root lattice. Every such mu occurs.
  auto ball = rs.dominant_weights_in_ball(lr_norm2);
  std::vector<std::vector<long>> dominant;
  std::vector<long> heights;
  for (const auto& mu : ball) {
    lie::Weight diff(rs.rank());
    for (int i = 0; i < rs.rank(); ++i) diff[i] = lambda[i] - mu[i];
    RatVec rc = rs.weight_root_coords(diff);
    bool ok = true;
    long height = 0;
    for (const Rat& c : rc) {
      if (!c.is_integer() || c.sign() < 0) { ok = false; break; }
      height += c.num();
    }
    if (!ok) continue;
    dominant.push_back(to_long_coords(mu));
    heights.push_back(height);
  }
  if (dominant.size() > budget)
    throw std::runtime_error("freudenthal weight budget exceeded");
  // sort by height (lambda first)
  std::vector<std::size_t> order(dominant.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (heights[a] != heights[b]) return heights[a] < heights[b];
    return dominant[a] < dominant[b];
  });

  Rat lam_norm2 = rs.norm2_weight(lambda);
  std::map<std::vector<long>, long long> mult;
  std::vector<std::pair<std::vector<long>, long long>> out;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::vector<long>& mu = dominant[order[oi]];
    if (heights[order[oi]] == 0) {
      mult[mu] = 1;
      out.emplace_back(mu, 1);
      continue;
    }
    lie::Weight mu_w = to_weight(mu);
    Rat acc;
    for (int ri = 0; ri < rs.n_plus(); ++ri) {
      // alpha in fundamental coordinates
      std::vector<long> alpha(rs.rank(), 0);
      for (int i = 0; i < rs.rank(); ++i)
        for (int j = 0; j < rs.rank(); ++j)
          alpha[j] += rs.positive_roots()[ri][i] * rs.cartan()[i][j];
      std::vector<long> nu = mu;
      for (int k = 1;; ++k) {
        for (int i = 0; i < rs.rank(); ++i) nu[i] += alpha[i];
        lie::Weight nu_w = to_weight(nu);
        Rat nu_norm2 = rs.norm2_weight(nu_w);
        Rat na = rs.root_dot_basic(ri, nu_w);
        if (nu_norm2 > lam_norm2 && na.sign() > 0) break;
        auto it = mult.find(dominantize(rs, nu));
        if (it != mult.end() && it->second != 0)
          acc += Rat(it->second) * na;
        if (k > 4096) throw std::logic_error("freudenthal ray runaway");
      }
    }
    lie::Weight mu_rho = to_weight(mu);
    for (auto& c : mu_rho) c += Rat(1);
    Rat denom = lr_norm2 / rs.scale() - rs.norm2_weight(mu_rho) / rs.scale();
    Rat m = Rat(2) * acc / denom;
    if (!m.is_integer() || m.sign() < 0)
      throw std::logic_error("freudenthal produced a non-integral multiplicity");
    mult[mu] = m.num();
    out.emplace_back(mu, m.num());
  }
  return out;
}

std::vector<std::vector<long>> weyl_orbit(const lie::RootSystem& rs,
                                          const std::vector<long>& weight) {
  std::set<std::vector<long>> seen;
  std::vector<std::vector<long>> queue{weight};
  seen.insert(weight);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    std::vector<long> cur = queue[q];
    for (int i = 0; i < rs.rank(); ++i) {
      std::vector<long> img = cur;
      long c = cur[i];
      if (c == 0) continue;
      std::vector<long> alpha = simple_root_fund(rs, i);
      for (int j = 0; j < rs.rank(); ++j) img[j] -= c * alpha[j];
      if (seen.insert(img).second) queue.push_back(img);
    }
  }
  return queue;
}

namespace {

// Jacobi eigenvalues of a real symmetric matrix (small sizes only).
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double app = a[p * n + p], aqq = a[q * n + q];
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

struct HermitianPoint {
  // n x n Hermitian, stored as real and imaginary parts
  int n;
  std::vector<double> re, im;

  explicit HermitianPoint(int n_) : n(n_), re(n_ * n_, 0.0), im(n_ * n_, 0.0) {}

  std::vector<double> eigenvalues() const {
    // embed into the 2n x 2n real symmetric [[Re, -Im], [Im, Re]]
    int m = 2 * n;
    std::vector<double> s(m * m, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        s[i * m + j] = re[i * n + j];
        s[(i + n) * m + (j + n)] = re[i * n + j];
        s[i * m + (j + n)] = -im[i * n + j];
        s[(i + n) * m + j] = im[i * n + j];
      }
    std::vector<double> all = symmetric_eigenvalues(std::move(s), m);
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = all[2 * i]; // doubled spectrum
    return eig;
  }
};

double det_lu(std::vector<double> a, int n) {
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      det = -det;
    }
    det *= a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / a[col * n + col];
      for (int j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
    }
  }
  return det;
}

// Evaluate the invariant extension of p at a Hermitian traceless point:
// p(X) = p_t(eigenvalue coordinates), solved back into root coordinates
// through the defining weights.
struct EigenvalueModel {
  const lie::RootSystem* rs;
  const RealDeformation* def;
  RatPoly cas;
  std::vector<std::vector<double>> eps_rows; // <eps_i, alpha_j>, i=1..rank

  EigenvalueModel(const lie::RootSystem& rs_in, const RealDeformation& d)
      : rs(&rs_in), def(&d), cas(casimir_poly(rs_in)) {
    int n = rs->rank();
    RatVec eps = rs->weight_root_coords([&] {
      lie::Weight w(n, Rat(0));
      w[0] = Rat(1);
      return w;
    }());
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(n);
      for (int j = 0; j < n; ++j) {
        RatVec aj(n, Rat(0));
        aj[j] = Rat(1);
        row[j] = rs->inner_rr_basic(eps, aj).to_double();
      }
      eps_rows.push_back(row);
      eps[i] -= Rat(1); // eps_{i+1} = eps_i - alpha_i
    }
  }

  double eval_at_root_coords(const std::vector<double>& x) const {
    double v = cas.eval_double(x);
    for (const auto& [delta, p] : def->terms) v += delta * p.eval_double(x);
    return v;
  }

  double eval(const HermitianPoint& pt) const {
    std::vector<double> t = pt.eigenvalues();
    std::sort(t.begin(), t.end(), std::greater<double>());
    // solve eps_rows * x = t[0..rank-1]
    int n = rs->rank();
    std::vector<double> a(n * n);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i * n + j] = eps_rows[i][j];
      b[i] = t[i];
    }
    // Gaussian elimination
    for (int col = 0; col < n; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
      std::swap(b[piv], b[col]);
      for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        double f = a[r * n + col] / a[col * n + col];
        for (int j = 0; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
        b[r] -= f * b[col];
      }
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] / a[i * n + i];
    return eval_at_root_coords(x);
  }
};

double hessian_det_at_step(const EigenvalueModel& model, const RatVec& xi_root,
                           double h) {
  const lie::RootSystem& rs = *model.rs;
  int rank = rs.rank();
  int n = rank + 1;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  // base point: diagonal matrix with entries <eps_i, xi>
  std::vector<double> xi(rank);
  for (int i = 0; i < rank; ++i) xi[i] = xi_root[i].to_double();
  std::vector<double> diag(n, 0.0);
  {
    // reconstruct all n diagonal entries from the defining weights
    RatVec eps = rs.weight_root_coords([&] {
      lie::Weight w(rank, Rat(0));
      w[0] = Rat(1);
      return w;
    }());
    for (int i = 0; i < n; ++i) {
      Rat acc;
      for (int j = 0; j < rank; ++j) {
        RatVec aj(rank, Rat(0));
        aj[j] = Rat(1);
        acc += rs.inner_rr_basic(eps, aj) * xi_root[j];
      }
      diag[i] = acc.to_double();
      if (i < rank) eps[i] -= Rat(1);
    }
  }

  // orthonormal basis of the off-diagonal block
  struct Dir { int i, j; bool sym; };
  std::vector<Dir> dirs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      dirs.push_back({i, j, true});
      dirs.push_back({i, j, false});
    }
  int m = static_cast<int>(dirs.size()); // n^2 - n

  auto point = [&](int a, double sa, int b, double sb) {
    HermitianPoint pt(n);
    for (int i = 0; i < n; ++i) pt.re[i * n + i] = diag[i];
    auto add = [&](const Dir& d, double amp) {
      if (d.sym) {
        pt.re[d.i * n + d.j] += amp * inv_sqrt2;
        pt.re[d.j * n + d.i] += amp * inv_sqrt2;
      } else {
        pt.im[d.i * n + d.j] += amp * inv_sqrt2;
        pt.im[d.j * n + d.i] -= amp * inv_sqrt2;
      }
    };
    if (a >= 0) add(dirs[a], sa);
    if (b >= 0) add(dirs[b], sb);
    return model.eval(pt);
  };

  double f0 = point(-1, 0, -1, 0);
  std::vector<double> hess(m * m, 0.0);
  for (int a = 0; a < m; ++a) {
    // diagonal entry
    double fp = point(a, h, -1, 0);
    double fm = point(a, -h, -1, 0);
    hess[a * m + a] = (fp - 2.0 * f0 + fm) / (h * h);
    for (int b = a + 1; b < m; ++b) {
      double fpp = point(a, h, b, h);
      double fpm = point(a, h, b, -h);
      double fmp = point(a, -h, b, h);
      double fmm = point(a, -h, b, -h);
      double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      hess[a * m + b] = v;
      hess[b * m + a] = v;
    }
  }
  return det_lu(std::move(hess), m);
}

} // namespace

double sun_eigenvalue_hessian_det(const lie::RootSystem& rs_a,
                                  const RealDeformation& def,
                                  const RatVec& xi_root, double h,
                                  double* err_estimate) {
  if (rs_a.type() != lie::SimpleType::A)
    throw std::invalid_argument("eigenvalue-model oracle is type A only");
  EigenvalueModel model(rs_a, def);
  // regularity: all alpha . xi nonzero
  for (int i = 0; i < rs_a.n_plus(); ++i) {
    RatVec a(rs_a.rank());
    for (int j = 0; j < rs_a.rank(); ++j)
      a[j] = Rat(rs_a.positive_roots()[i][j]);
    if (rs_a.inner_rr_basic(a, xi_root).is_zero())
      throw std::invalid_argument("xi must be a regular element");
  }
  double d1 = hessian_det_at_step(model, xi_root, h);
  double d2 = hessian_det_at_step(model, xi_root, h / 2.0);
  if (err_estimate) *err_estimate = std::fabs(d1 - d2);
  // central differences have O(h^2) error: Richardson in h^2
  return (4.0 * d2 - d1) / 3.0;
}

double lemma_det_p_product(const lie::RootSystem& rs,
                           const RealDeformation& def, const RatVec& xi_root) {
  int n = rs.rank();
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = xi_root[i].to_double();
  // coordinate partials of p at xi
  RatPoly cas = casimir_poly(rs);
  std::vector<double> dp(n, 0.0);
  for (int i = 0; i < n; ++i) {
    dp[i] = cas.derivative(i).eval_double(x);
    for (const auto& [delta, p] : def.terms)
      dp[i] += delta * p.derivative(i).eval_double(x);
  }
  double prod = 1.0;
  for (int ri = 0; ri < rs.n_plus(); ++ri) {
    const auto& alpha = rs.positive_roots()[ri];
    // alpha . p'(xi) = alpha^T (coordinate partials); alpha . xi via the
    // scaled Gram. Both are the scaled inner product with the metric
    // gradient resp. the point.
    double num = 0.0;
    for (int i = 0; i < n; ++i) num += alpha[i] * dp[i];
    RatVec av(n);
    for (int i = 0; i < n; ++i) av[i] = Rat(alpha[i]);
    Rat axi = rs.inner_rr(av, xi_root);
    prod *= num / axi.to_double();
  }
  return prod * prod;
}

} // namespace witten::oracles
