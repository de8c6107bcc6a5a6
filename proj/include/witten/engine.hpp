// Assembly of the per-weight localization summands and the regularized
// summation over dominant weights, for the three targets: conjugacy-class
// Fourier coefficients, the double, and the full moduli-space pairing.
#pragma once

#include "witten/deformation.hpp"
#include "witten/rep_volumes.hpp"
#include "witten/summation.hpp"
#include "witten/super_series.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace witten::engine {

using deform::DeformedP;
using deform::DetVariant;
using deform::OddHandle;
using deform::SeriesPoint;
using series::Monomial;
using series::SeriesMatrix;
using series::SuperSeries;
using series::TablePtr;

struct BetaHandleSpec {
  std::vector<RatPoly> eps1; // P^{(1)}_j = sum_i eps_i^{(1)} p_i
  std::vector<RatPoly> eps2;
};

struct BetaSpecInput {
  std::vector<std::pair<std::string, RatPoly>> sigmas;
  std::vector<BetaHandleSpec> handles; // one per genus handle; may be empty
};

struct SummationOptions {
  // Auto picks hard truncation when the dimension-power decay is at least
  // quadratic and every marking polynomial is constant; polynomial Q growth
  // makes convergence conditional, so those runs get the Gaussian regulator.
  enum class Mode { Auto, Truncate, ConvergenceFactor };
  Mode mode = Mode::Auto;
  Rat radius2 = Rat(100);       // squared ball radius for ||lambda+rho||
  double tolerance = 1e-9;
  std::vector<double> epsilons; // convergence-factor sequence; default below
  bool accelerate = true;       // partial-sum Richardson in truncate mode
  int threads = 0;              // 0 = hardware concurrency
  long long term_budget = 1'000'000;

  std::vector<double> epsilon_sequence() const {
    if (!epsilons.empty()) return epsilons;
    std::vector<double> e;
    double v = 0.1;
    for (int i = 0; i < 6; ++i) { e.push_back(v); v /= 2; }
    return e;
  }
};

struct PairingSpec {
  std::shared_ptr<const lie::RootSystem> rs;
  int genus = 0;
  std::vector<rep::Marking> markings;
  std::vector<std::pair<std::string, RatPoly>> deformation; // (delta name, p_j)
  BetaSpecInput beta;
  int truncation = 4;
  SummationOptions summation;

  void validate() const {
    if (!rs) throw std::invalid_argument("pairing spec has no group");
    int s = genus, r = static_cast<int>(markings.size());
    if (s < 0) throw std::invalid_argument("genus must be nonnegative");
    if (!(2 * s + r >= 3 || s >= 2))
      throw std::invalid_argument(
          "need 2*genus + #markings >= 3 (or genus >= 2) for a generic "
          "central stabilizer");
    if (!beta.handles.empty() &&
        static_cast<int>(beta.handles.size()) != s)
      throw std::invalid_argument("beta handle data must match the genus");
  }
};

struct PairingResult {
  std::vector<std::string> monomials; // canonical order
  std::map<std::string, std::pair<double, double>> coefficients;
  long long terms_summed = 0;
  double tail_bound = 0;
  double extrapolation_residual = 0;
  bool divergent = false;
  std::string mode;
  // (epsilon, per-monomial value) pairs in convergence-factor mode;
  // (N, value) partial-sum checkpoints in truncate mode.
  std::vector<std::pair<double, std::map<std::string, std::pair<double, double>>>>
      trace;
  double wallclock_ms = 0; // console diagnostic; never written to files
};

// Everything derivable from the problem statement once, shared across weights.
template <class R> struct Assembled {
  const PairingSpec* spec;
  TablePtr table;
  DeformedP p;
  std::vector<std::pair<int, RatPoly>> sigmas;
  std::vector<OddHandle> handles;
  R volg;
  R center;
  struct MarkCtx {
    const rep::Marking* m;
    R vol_c;
    std::vector<lie::WeylElement> right_reps; // W_K \ W representatives
    std::vector<int> non_k_roots;
    int dim_c_half;
  };
  std::vector<MarkCtx> marks;
};

template <class R> Assembled<R> assemble(const PairingSpec& spec) {
  spec.validate();
  const lie::RootSystem& rs = *spec.rs;
  Assembled<R> a;
  a.spec = &spec;

  std::vector<std::string> evens, odds;
  for (const auto& [name, poly] : spec.deformation) evens.push_back(name);
  for (const auto& [name, poly] : spec.beta.sigmas) evens.push_back(name);
  for (std::size_t j = 0; j < spec.beta.handles.size(); ++j) {
    const auto& h = spec.beta.handles[j];
    for (std::size_t i = 0; i < h.eps1.size(); ++i)
      odds.push_back("eps" + std::to_string(i + 1) + "_" +
                     std::to_string(j + 1) + "(1)");
    for (std::size_t i = 0; i < h.eps2.size(); ++i)
      odds.push_back("eps" + std::to_string(i + 1) + "_" +
                     std::to_string(j + 1) + "(2)");
  }
  a.table = series::make_table(evens, odds, spec.truncation);

  std::vector<std::pair<int, RatPoly>> dterms;
  for (std::size_t i = 0; i < spec.deformation.size(); ++i)
    dterms.emplace_back(static_cast<int>(i), spec.deformation[i].second);
  a.p = DeformedP::make(rs, std::move(dterms));

  int sigma_base = static_cast<int>(spec.deformation.size());
  for (std::size_t i = 0; i < spec.beta.sigmas.size(); ++i) {
    const RatPoly& poly = spec.beta.sigmas[i].second;
    if (!is_invariant(rs, poly, {}))
      throw std::invalid_argument("sigma polynomial is not W-invariant");
    a.sigmas.emplace_back(sigma_base + static_cast<int>(i), poly);
  }

  int odd_cursor = 0;
  for (const auto& h : spec.beta.handles) {
    OddHandle oh;
    for (const RatPoly& poly : h.eps1) {
      if (!is_invariant(rs, poly, {}))
        throw std::invalid_argument("handle polynomial is not W-invariant");
      oh.p1.emplace_back(odd_cursor++, poly);
    }
    for (const RatPoly& poly : h.eps2) {
      if (!is_invariant(rs, poly, {}))
        throw std::invalid_argument("handle polynomial is not W-invariant");
      oh.p2.emplace_back(odd_cursor++, poly);
    }
    a.handles.push_back(std::move(oh));
  }

  a.volg = rep::vol_g<R>(rs);
  a.center = R(static_cast<double>(rs.center_order()));

  for (const rep::Marking& m : spec.markings) {
    typename Assembled<R>::MarkCtx ctx;
    ctx.m = &m;
    ctx.vol_c = rep::vol_conjugacy_class<R>(rs, m);
    for (const auto& w : rs.coset_representatives(m.k_roots))
      ctx.right_reps.push_back(rs.weyl_inverse(w));
    std::vector<bool> in_k(rs.n_plus(), false);
    for (int idx : m.k_roots) in_k[idx] = true;
    for (int i = 0; i < rs.n_plus(); ++i)
      if (!in_k[i]) ctx.non_k_roots.push_back(i);
    ctx.dim_c_half = static_cast<int>(ctx.non_k_roots.size());
    a.marks.push_back(std::move(ctx));
  }
  return a;
}

// chi_lambda(C)/dim with the coset representatives precomputed.
template <class R>
Cx<R> char_ratio_cached(const lie::RootSystem& rs,
                        const typename Assembled<R>::MarkCtx& ctx,
                        const RatVec& lr_root) {
  RatVec mu_root = rs.weight_root_coords(ctx.m->mu);
  Cx<R> sum;
  for (const auto& v : ctx.right_reps) {
    RatVec x = rs.apply_weyl_root(v, lr_root);
    Rat phase = rs.inner_rr_basic(x, mu_root);
    R denom(1);
    for (int i : ctx.non_k_roots) {
      RatVec alpha(rs.rank());
      for (int j = 0; j < rs.rank(); ++j)
        alpha[j] = Rat(rs.positive_roots()[i][j]);
      denom = denom * Num<R>::from_rat(rs.inner_rr(alpha, x));
    }
    sum += unit_phase<R>(phase) * Cx<R>(R(1) / denom);
  }
  R two_pi = Num<R>::pi() + Num<R>::pi();
  Cx<R> pref = i_power<R>(-ctx.dim_c_half) *
               Cx<R>(pow_int(two_pi, -static_cast<long>(ctx.dim_c_half)) /
                     ctx.vol_c);
  if (ctx.m->sign_exponent & 1) pref = -pref;
  return pref * sum;
}

template <class R>
SuperSeries<R> series_int_pow(const SuperSeries<R>& s, long e) {
  if (e < 0) return series_int_pow(series::invert(s), -e);
  SuperSeries<R> acc = SuperSeries<R>::one(s.table());
  SuperSeries<R> base = s;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// The full moduli-space summand: the lambda-term of
//   (2 pi i)^{-dim M/2} int beta_red e^{2 pi i f^p}
//   = #Z (vol_G)^{2s-2} e^{R~} (det^{1/2} p'' / dim)^{2s+r-2}
//     prod_l Q_l Vol(C_l) conj(chi_lambda(C_l)) / det^{1/2} p''_{k_l}.
template <class R>
SuperSeries<R> pairing_term(const Assembled<R>& a, const lie::Weight& lambda) {
  const lie::RootSystem& rs = *a.spec->rs;
  lie::Weight lr = lambda;
  for (auto& c : lr) c += Rat(1);
  RatVec lr_root = rs.weight_root_coords(lr);

  SeriesPoint<R> xi = deform::solve_xi<R>(rs, a.p, a.table, lr_root);
  SuperSeries<R> dhalf = deform::det_half_pp(rs, a.p, xi, {}, DetVariant::Full);
  SuperSeries<R> ert =
      series::exp(deform::rtilde(rs, a.p, xi, a.sigmas, a.handles));
  R dim = rep::weyl_dim_real<R>(rs, lambda);

  int s = a.spec->genus, r = static_cast<int>(a.spec->markings.size());
  SuperSeries<R> term =
      ert * series_int_pow(dhalf * Cx<R>(R(1) / dim), 2L * s + r - 2);
  term *= Cx<R>(a.center * pow_int(a.volg, 2L * s - 2));

  for (const auto& ctx : a.marks) {
    SuperSeries<R> q = deform::eval_poly<R>(a.table, ctx.m->q, xi);
    Cx<R> chibar = conj(char_ratio_cached<R>(rs, ctx, lr_root) * Cx<R>(dim));
    SuperSeries<R> detk = deform::det_half_pp(rs, a.p, xi, ctx.m->k_roots,
                                              DetVariant::SubalgebraK);
    term *= q * (chibar * Cx<R>(ctx.vol_c)) * series::invert(detk);
  }
  return term;
}

// <n^beta, conj(chi_lambda)> for a single conjugacy class (the Fourier
// coefficient of the class distribution), with the (2 pi i)^{dim C/2}
// prefactor folded in exactly.
template <class R>
SuperSeries<R> conjugacy_fourier_term(const lie::RootSystem& rs,
                                      const rep::Marking& m, const DeformedP& p,
                                      const TablePtr& table,
                                      const lie::Weight& lambda) {
  lie::Weight lr = lambda;
  for (auto& c : lr) c += Rat(1);
  RatVec lr_root = rs.weight_root_coords(lr);
  SeriesPoint<R> xi = deform::solve_xi<R>(rs, p, table, lr_root);
  SuperSeries<R> q = deform::eval_poly<R>(table, m.q, xi);
  SuperSeries<R> ratio =
      deform::det_half_pp(rs, p, xi, m.k_roots, DetVariant::Ratio);
  Cx<R> chibar = conj(rep::char_value<R>(rs, lambda, m));
  R volc = rep::vol_conjugacy_class<R>(rs, m);
  int dim_c_half = rs.n_plus() - static_cast<int>(m.k_roots.size());
  R two_pi = Num<R>::pi() + Num<R>::pi();
  Cx<R> pref = i_power<R>(dim_c_half) *
               Cx<R>(pow_int(two_pi, static_cast<long>(dim_c_half)) * volc);
  return q * ratio * (pref * chibar);
}

// <n^beta, conj(chi_lambda)> for the double with one handle of odd data:
//   (2 pi i)^{dim G} (vol_G)^2 det p''(xi) e^{R~} / dim V_lambda.
template <class R>
SuperSeries<R> double_fourier_term(
    const lie::RootSystem& rs, const DeformedP& p, const TablePtr& table,
    const lie::Weight& lambda,
    const std::vector<std::pair<int, RatPoly>>& sigmas,
    const std::vector<OddHandle>& handles) {
  lie::Weight lr = lambda;
  for (auto& c : lr) c += Rat(1);
  RatVec lr_root = rs.weight_root_coords(lr);
  SeriesPoint<R> xi = deform::solve_xi<R>(rs, p, table, lr_root);
  SuperSeries<R> dhalf = deform::det_half_pp(rs, p, xi, {}, DetVariant::Full);
  SuperSeries<R> ert = series::exp(deform::rtilde(rs, p, xi, sigmas, handles));
  R dim = rep::weyl_dim_real<R>(rs, lambda);
  R two_pi = Num<R>::pi() + Num<R>::pi();
  Cx<R> pref = i_power<R>(rs.dim_g()) *
               Cx<R>(pow_int(two_pi, static_cast<long>(rs.dim_g())) *
                     pow_int(rep::vol_g<R>(rs), 2) / dim);
  return dhalf * dhalf * ert * pref;
}

// Coefficientwise check that the assembled moduli summand factors into the
// per-piece fixed point contributions:
//   pairing = #Z (2 pi i)^{-dim M/2} vol_G^{-2} det p''^{-1} dim^{2-s-r}
//             e^{R} prod_j double_j prod_l class_l.
// Returns the max coefficient deviation, relative to the term scale.
template <class R>
R fusion_check_max_diff(const Assembled<R>& a, const lie::Weight& lambda) {
  const lie::RootSystem& rs = *a.spec->rs;
  int s = a.spec->genus, r = static_cast<int>(a.spec->markings.size());
  lie::Weight lr = lambda;
  for (auto& c : lr) c += Rat(1);
  RatVec lr_root = rs.weight_root_coords(lr);
  SeriesPoint<R> xi = deform::solve_xi<R>(rs, a.p, a.table, lr_root);

  SuperSeries<R> composed = SuperSeries<R>::one(a.table);
  long dim_m_half = static_cast<long>(s) * rs.dim_g();
  for (int j = 0; j < s; ++j) {
    std::vector<OddHandle> one_handle;
    if (!a.handles.empty()) one_handle.push_back(a.handles[j]);
    composed *= double_fourier_term<R>(rs, a.p, a.table, lambda, {}, one_handle);
  }
  for (const auto& ctx : a.marks) {
    composed *=
        conjugacy_fourier_term<R>(rs, *ctx.m, a.p, a.table, lambda);
    dim_m_half += ctx.dim_c_half;
  }
  // e^{R} with the sigma part only
  composed *= series::exp(deform::rtilde(rs, a.p, xi, a.sigmas, {}));
  SuperSeries<R> det_full =
      deform::det_half_pp(rs, a.p, xi, {}, DetVariant::Full);
  composed *= series::invert(det_full * det_full);
  R dim = rep::weyl_dim_real<R>(rs, lambda);
  R two_pi = Num<R>::pi() + Num<R>::pi();
  Cx<R> pref = i_power<R>(-dim_m_half) *
               Cx<R>(pow_int(two_pi, -dim_m_half) * a.center *
                     pow_int(dim, 2L - s - r) / pow_int(a.volg, 2));
  composed *= pref;

  SuperSeries<R> direct = pairing_term<R>(a, lambda);
  R scale = max_abs_coef(direct);
  if (!(scale > R(0))) scale = R(1);
  return max_coef_diff(direct, composed) / scale;
}

namespace detail {

template <class R>
std::map<std::string, std::pair<double, double>>
snapshot(const series::GeneratorTable& table,
         const std::map<Monomial, CompensatedCx<R>>& acc) {
  std::map<std::string, std::pair<double, double>> out;
  for (const auto& [m, c] : acc) {
    Cx<R> v = c.value();
    out[series::monomial_key(table, m)] = {Num<R>::to_double(v.re),
                                           Num<R>::to_double(v.im)};
  }
  return out;
}

inline double table_diff(
    const std::map<std::string, std::pair<double, double>>& a,
    const std::map<std::string, std::pair<double, double>>& b) {
  double m = 0;
  auto upd = [&m](double x) {
    if (std::isnan(x)) m = x;
    else if (std::fabs(x) > m) m = std::fabs(x);
  };
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    double br = it == b.end() ? 0.0 : it->second.first;
    double bi = it == b.end() ? 0.0 : it->second.second;
    upd(v.first - br);
    upd(v.second - bi);
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) { upd(v.first); upd(v.second); }
  return m;
}

} // namespace detail

// Deterministic parallel map over weights: terms are computed in blocks by a
// thread pool and reduced strictly in weight order, so the result does not
// depend on the thread count.
template <class R>
std::vector<SuperSeries<R>> map_terms(const Assembled<R>& a,
                                      const std::vector<lie::Weight>& weights,
                                      int threads) {
  std::vector<SuperSeries<R>> terms(weights.size(), SuperSeries<R>(a.table));
  unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  if (n <= 1 || weights.size() < 32) {
    for (std::size_t i = 0; i < weights.size(); ++i)
      terms[i] = pairing_term<R>(a, weights[i]);
    return terms;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n);
  for (unsigned t = 0; t < n; ++t)
    pool.emplace_back([&, t] {
      try {
        while (true) {
          std::size_t base = next.fetch_add(64);
          if (base >= weights.size()) break;
          std::size_t end = std::min(weights.size(), base + 64);
          for (std::size_t i = base; i < end; ++i)
            terms[i] = pairing_term<R>(a, weights[i]);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return terms;
}

inline SummationOptions::Mode resolve_mode(const PairingSpec& spec) {
  if (spec.summation.mode != SummationOptions::Mode::Auto)
    return spec.summation.mode;
  int s = spec.genus, r = static_cast<int>(spec.markings.size());
  bool q_constant = true;
  for (const auto& m : spec.markings)
    if (m.q.degree() > 0) q_constant = false;
  return (2 * s + r - 2 >= 2 && q_constant)
             ? SummationOptions::Mode::Truncate
             : SummationOptions::Mode::ConvergenceFactor;
}

template <class R> PairingResult sum_pairing(const PairingSpec& spec) {
  auto t_start = std::chrono::steady_clock::now();
  Assembled<R> a = assemble<R>(spec);
  const lie::RootSystem& rs = *spec.rs;
  const SummationOptions& opt = spec.summation;
  const SummationOptions::Mode mode = resolve_mode(spec);

  PairingResult res;
  res.mode = mode == SummationOptions::Mode::Truncate ? "truncate"
                                                      : "convergence_factor";

  std::vector<lie::Weight> weights =
      rs.dominant_weights_in_ball(opt.radius2);
  if (static_cast<long long>(weights.size()) > opt.term_budget)
    throw std::runtime_error(
        "weight enumeration exceeds the term budget (" +
        std::to_string(weights.size()) + " > " +
        std::to_string(opt.term_budget) + ")");
  res.terms_summed = static_cast<long long>(weights.size());

  if (weights.empty()) {
    res.coefficients["1"] = {0.0, 0.0};
    res.monomials.push_back("1");
    return res;
  }

  std::vector<SuperSeries<R>> terms = map_terms<R>(a, weights, opt.threads);

  // checkpoint indices N/2^j, ascending and unique
  std::vector<std::size_t> checks;
  for (int j = 5; j >= 0; --j) {
    std::size_t nj = weights.size() >> j;
    if (nj == 0) continue;
    if (checks.empty() || checks.back() != nj) checks.push_back(nj);
  }

  if (mode == SummationOptions::Mode::Truncate) {
    std::map<Monomial, CompensatedCx<R>> acc;
    std::vector<std::map<std::string, std::pair<double, double>>> snaps;
    std::size_t ci = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (const auto& [m, c] : terms[i].terms()) acc[m].add(c);
      while (ci < checks.size() && i + 1 == checks[ci]) {
        snaps.push_back(detail::snapshot<R>(*a.table, acc));
        ++ci;
      }
    }
    auto full = snaps.back();

    // Arithmetic noise floor: no tail claim below the rounding level of the
    // emitted coefficients. Checkpoints and results are double regardless of
    // the working scalar, so the floor uses double epsilon.
    double coef_scale = 0;
    for (const auto& [k, v] : full)
      coef_scale = std::max({coef_scale, std::fabs(v.first),
                             std::fabs(v.second)});
    double noise = 16.0 * 2.220446049250313e-16 * std::max(1e-30, coef_scale);

    // plain geometric tail estimate from the last shells
    double tail_plain = 0;
    bool decaying = true;
    if (snaps.size() >= 3) {
      double d1 = detail::table_diff(snaps[snaps.size() - 1],
                                     snaps[snaps.size() - 2]);
      double d2 = detail::table_diff(snaps[snaps.size() - 2],
                                     snaps[snaps.size() - 3]);
      double q = d2 > 0 ? d1 / d2 : 0.0;
      if (q >= 1.0) {
        decaying = false;
        tail_plain = d1;
      } else {
        double g = q < 0.5 ? 1.0 : q / (1.0 - q);
        tail_plain = 2.0 * d1 * std::max(1.0, g);
      }
    } else {
      tail_plain = detail::table_diff(full, {});
    }
    tail_plain += noise;

    res.coefficients = full;
    res.tail_bound = tail_plain;
    if (!decaying && tail_plain > opt.tolerance) res.divergent = true;

    if (opt.accelerate && snaps.size() >= 3 && decaying) {
      // per-monomial Richardson in 1/N over the checkpoints
      std::vector<R> h;
      for (std::size_t n : checks)
        h.push_back(R(1) / R(static_cast<double>(n)));
      std::map<std::string, std::pair<double, double>> refined;
      double resid_max = 0;
      std::set<std::string> keys;
      for (const auto& s : snaps)
        for (const auto& [k, v] : s) keys.insert(k);
      for (const auto& key : keys) {
        std::vector<Cx<R>> vals;
        for (const auto& s : snaps) {
          auto it = s.find(key);
          vals.push_back(it == s.end()
                             ? Cx<R>()
                             : Cx<R>(Num<R>::from_double(it->second.first),
                                     Num<R>::from_double(it->second.second)));
        }
        auto [limit, resid] = neville_limit<R>(h, vals);
        refined[key] = {Num<R>::to_double(limit.re),
                        Num<R>::to_double(limit.im)};
        resid_max = std::max(resid_max, Num<R>::to_double(resid));
      }
      double tail_rich = 10.0 * resid_max + noise;
      if (tail_rich < tail_plain) {
        res.coefficients = refined;
        res.tail_bound = tail_rich;
        res.extrapolation_residual = resid_max;
      }
    }
    // record checkpoints in the trace
    for (std::size_t k = 0; k < snaps.size(); ++k)
      res.trace.emplace_back(static_cast<double>(checks[k]), snaps[k]);
  } else {
    // convergence-factor mode: S(eps) with the Gaussian regulator, then
    // polynomial extrapolation in eps -> 0.
    std::vector<double> eps = opt.epsilon_sequence();
    std::sort(eps.begin(), eps.end(), std::greater<double>());
    std::vector<R> norms;
    norms.reserve(weights.size());
    for (const auto& w : weights) {
      lie::Weight lr = w;
      for (auto& c : lr) c += Rat(1);
      norms.push_back(Num<R>::from_rat(rs.norm2_weight(lr)));
    }
    // Ball-truncation control: the smallest eps damps the boundary least,
    // so its outer-half-shell contribution bounds what the fixed radius may
    // be cutting off from every regulated sum.
    double shell_err = 0;
    std::vector<std::map<std::string, std::pair<double, double>>> svals;
    for (std::size_t ei = 0; ei < eps.size(); ++ei) {
      double e = eps[ei];
      std::map<Monomial, CompensatedCx<R>> acc;
      std::map<std::string, std::pair<double, double>> half;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        if (ei + 1 == eps.size() && i == terms.size() / 2)
          half = detail::snapshot<R>(*a.table, acc);
        R damp = Num<R>::exp(-(Num<R>::from_double(e) * norms[i]));
        for (const auto& [m, c] : terms[i].terms())
          acc[m].add(c * Cx<R>(damp));
      }
      svals.push_back(detail::snapshot<R>(*a.table, acc));
      if (ei + 1 == eps.size())
        shell_err = detail::table_diff(svals.back(), half);
      res.trace.emplace_back(e, svals.back());
    }
    std::vector<R> h;
    for (double e : eps) h.push_back(Num<R>::from_double(e));
    std::set<std::string> keys;
    for (const auto& s : svals)
      for (const auto& [k, v] : s) keys.insert(k);
    double resid_max = 0;
    for (const auto& key : keys) {
      std::vector<Cx<R>> vals;
      for (const auto& s : svals) {
        auto it = s.find(key);
        vals.push_back(it == s.end()
                           ? Cx<R>()
                           : Cx<R>(Num<R>::from_double(it->second.first),
                                   Num<R>::from_double(it->second.second)));
      }
      auto [limit, resid] = neville_limit<R>(h, vals);
      res.coefficients[key] = {Num<R>::to_double(limit.re),
                               Num<R>::to_double(limit.im)};
      resid_max = std::max(resid_max, Num<R>::to_double(resid));
    }
    res.extrapolation_residual = resid_max;
    res.tail_bound = resid_max + shell_err;
  }

  if (res.coefficients.empty()) res.coefficients["1"] = {0.0, 0.0};
  for (const auto& [k, v] : res.coefficients) res.monomials.push_back(k);
  res.wallclock_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - t_start)
          .count();
  return res;
}

} // namespace witten::engine
