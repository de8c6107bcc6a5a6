// witten: batch front end for intersection pairings on moduli spaces of
// flat bundles. Subcommands:
//   dims           Weyl dimensions for a list of weights
//   char           character values on a conjugacy class
//   volumes        group/orbit/class volumes
//   pairing        run a JSON problem file through the localization sum
//   witten-volume  symplectic volume of the moduli space (beta = 1)
//   verify         independent oracle suites
#include "witten/engine.hpp"
#include "witten/oracles.hpp"
#include "witten/problem_io.hpp"

#include <CLI11.hpp>

#include <random>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace witten;

namespace {

struct GroupArgs {
  std::string type_rank = "A1";
  std::string scale = "1";

  std::shared_ptr<lie::RootSystem> build() const {
    if (type_rank.size() < 2)
      throw io::ParseError("group must look like A2, B3, G2, ...");
    lie::SimpleType t = lie::parse_type(type_rank[0]);
    int rank = std::stoi(type_rank.substr(1));
    return std::make_shared<lie::RootSystem>(t, rank, Rat::parse(scale));
  }
};

lie::Weight parse_weight(const lie::RootSystem& rs, const std::string& text) {
  lie::Weight w;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) w.push_back(Rat::parse(part));
  if (static_cast<int>(w.size()) != rs.rank())
    throw io::ParseError("weight '" + text + "' needs " +
                         std::to_string(rs.rank()) + " coordinates");
  return w;
}

int default_threads() {
  if (const char* env = std::getenv("WITTEN_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0; // hardware concurrency
}

int cmd_dims(const GroupArgs& g, const std::vector<std::string>& lambdas) {
  auto rs = g.build();
  std::printf("%-16s %s\n", "lambda", "dim V_lambda");
  for (const auto& text : lambdas) {
    lie::Weight lam = parse_weight(*rs, text);
    std::printf("%-16s %s\n", text.c_str(), rep::weyl_dim(*rs, lam).str().c_str());
  }
  return 0;
}

int cmd_char(const GroupArgs& g, const std::string& lambda_text,
             const std::string& mu_text) {
  auto rs = g.build();
  lie::Weight lam = parse_weight(*rs, lambda_text);
  lie::Weight mu = parse_weight(*rs, mu_text);
  rep::Marking m =
      rep::Marking::make(*rs, mu, RatPoly::constant(rs->rank(), Rat(1)));
  Cx<double> ratio = rep::char_ratio<double>(*rs, lam, m);
  Cx<double> value = rep::char_value<double>(*rs, lam, m);
  std::printf("dim V_lambda      = %s\n", rep::weyl_dim(*rs, lam).str().c_str());
  std::printf("chi/dim           = %s + %s i\n",
              io::format_double(ratio.re).c_str(),
              io::format_double(ratio.im).c_str());
  std::printf("chi(exp mu)       = %s + %s i\n",
              io::format_double(value.re).c_str(),
              io::format_double(value.im).c_str());
  std::printf("|K-roots|         = %zu\n", m.k_roots.size());
  return 0;
}

int cmd_volumes(const GroupArgs& g, const std::string& mu_text) {
  auto rs = g.build();
  std::printf("group             = %s (scale %s)\n", rs->label().c_str(),
              rs->scale().str().c_str());
  std::printf("n_plus            = %d, |W| = %lld, #Z = %d\n", rs->n_plus(),
              rs->weyl_order(), rs->center_order());
  std::printf("vol_{G/T}         = %s\n",
              io::format_double(rep::vol_g_over_t<double>(*rs)).c_str());
  std::printf("vol_T (covolume)  = %s\n",
              io::format_double(rep::lattice_covolume<double>(*rs)).c_str());
  std::printf("vol_G             = %s\n",
              io::format_double(rep::vol_g<double>(*rs)).c_str());
  if (!mu_text.empty()) {
    lie::Weight mu = parse_weight(*rs, mu_text);
    rep::Marking m =
        rep::Marking::make(*rs, mu, RatPoly::constant(rs->rank(), Rat(1)));
    std::printf("Vol(G.mu) orbit   = %s\n",
                io::format_double(rep::vol_coadjoint_orbit<double>(*rs, mu))
                    .c_str());
    std::printf("Vol(C) class      = %s\n",
                io::format_double(rep::vol_conjugacy_class<double>(*rs, m))
                    .c_str());
  }
  return 0;
}

void print_result_table(const engine::PairingResult& r) {
  std::printf("%-40s %-25s %s\n", "monomial", "re", "im");
  for (const auto& [key, v] : r.coefficients)
    std::printf("%-40s %-25s %s\n", key.c_str(),
                io::format_double(v.first).c_str(),
                io::format_double(v.second).c_str());
  std::printf("\nmode=%s terms=%lld tail_bound=%s residual=%s divergent=%s\n",
              r.mode.c_str(), r.terms_summed,
              io::format_double(r.tail_bound).c_str(),
              io::format_double(r.extrapolation_residual).c_str(),
              r.divergent ? "yes" : "no");
  std::printf("wallclock_ms=%.1f\n", r.wallclock_ms);
}

int run_and_emit(io::ProblemConfig& cfg, const std::string& out_path,
                 int threads_override) {
  if (threads_override > 0) cfg.spec.summation.threads = threads_override;
  if (cfg.spec.summation.threads == 0)
    cfg.spec.summation.threads = default_threads();
  engine::PairingResult r = cfg.precision == io::Precision::Extended
                                ? engine::sum_pairing<DD>(cfg.spec)
                                : engine::sum_pairing<double>(cfg.spec);
  print_result_table(r);
  if (!out_path.empty()) {
    nlohmann::json out = io::result_to_json(r);
    std::ofstream f(out_path);
    if (!f) {
      std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
      return 1;
    }
    f << out.dump(2) << "\n";
  }
  return r.divergent ? 2 : 0;
}

int cmd_pairing(const std::string& input, const std::string& out_path,
                int threads, const std::string& precision) {
  std::ifstream f(input);
  if (!f) {
    std::fprintf(stderr, "error: cannot read %s\n", input.c_str());
    return 1;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  io::ProblemConfig cfg = io::parse_problem_text(ss.str());
  if (precision == "extended") cfg.precision = io::Precision::Extended;
  else if (precision == "double") cfg.precision = io::Precision::Double;
  else if (!precision.empty())
    throw io::ParseError("--precision must be double or extended");
  return run_and_emit(cfg, out_path, threads);
}

int cmd_witten_volume(const GroupArgs& g, int genus, const std::string& radius,
                      const std::string& out_path, int threads) {
  io::ProblemConfig cfg;
  cfg.spec.rs = g.build();
  cfg.spec.genus = genus;
  cfg.spec.truncation = 0;
  cfg.spec.summation.radius2 = io::radius2_from_json(nlohmann::json(radius));
  return run_and_emit(cfg, out_path, threads);
}

// ---- verify suites --------------------------------------------------------

struct SuiteResult {
  bool pass;
  double max_err;
};

SuiteResult suite_orthonormality(const lie::RootSystem& rs) {
  Rat rad2 = Rat(25) / rs.scale(); // ||lambda+rho|| <= 5 at scale 1
  auto weights = rs.dominant_weights_in_ball(rad2);
  std::vector<oracles::TrigPoly<double>> chars;
  for (const auto& lam : weights)
    chars.push_back(oracles::character_trig<double>(rs, lam));
  double worst = 0;
  for (std::size_t i = 0; i < chars.size(); ++i)
    for (std::size_t j = 0; j < chars.size(); ++j) {
      Cx<double> p =
          oracles::torus_quadrature_pairing<double>(rs, chars[i], chars[j]);
      double expect = i == j ? 1.0 : 0.0;
      worst = std::max(worst, cx_abs(p - Cx<double>(expect)));
    }
  return {worst <= 1e-8, worst};
}

SuiteResult suite_freudenthal(const lie::RootSystem& rs) {
  std::mt19937 rng(421);
  std::uniform_int_distribution<int> lam_c(0, 3);
  std::uniform_int_distribution<int> num(0, 7);
  RatPoly one = RatPoly::constant(rs.rank(), Rat(1));
  double worst = 0;
  int done = 0;
  while (done < 40) {
    lie::Weight lam(rs.rank()), mu(rs.rank());
    for (int i = 0; i < rs.rank(); ++i) lam[i] = Rat(lam_c(rng));
    for (int i = 0; i < rs.rank(); ++i) mu[i] = Rat(num(rng), 13);
    if (!rs.in_closed_alcove(mu)) continue;
    rep::Marking m = rep::Marking::make(rs, mu, one);
    Cx<double> a = rep::char_value<double>(rs, lam, m);
    Cx<double> b = oracles::freudenthal_character<double>(rs, lam, mu);
    worst = std::max(worst, cx_abs(a - b) / std::max(1.0, cx_abs(b)));
    ++done;
  }
  return {worst <= 1e-10, worst};
}

SuiteResult suite_hessian_lemma(const lie::RootSystem& rs) {
  oracles::RealDeformation def;
  def.terms.emplace_back(1e-2, rs.rank() == 1 ? power_sum_poly(rs, 4)
                                              : power_sum_poly(rs, 3));
  RatVec xi(rs.rank());
  for (int i = 0; i < rs.rank(); ++i) xi[i] = Rat(2 + i, 3);
  double err = 0;
  double fd = oracles::sun_eigenvalue_hessian_det(rs, def, xi, 2e-3, &err);
  double lemma = oracles::lemma_det_p_product(rs, def, xi);
  double rel = std::fabs(fd - lemma) / std::fabs(lemma);
  return {rel <= 1e-6, rel};
}

SuiteResult suite_inversion(const lie::RootSystem& rs) {
  auto table = series::make_table({"delta1", "delta2"}, {}, 4);
  deform::DeformedP p = deform::DeformedP::make(
      rs, {{0, casimir_poly(rs) * casimir_poly(rs) * Rat(1, 5)},
           {1, casimir_poly(rs) * Rat(1, 3)}});
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(1, 5);
  double worst = 0;
  for (int rep = 0; rep < 10; ++rep) {
    lie::Weight lam(rs.rank());
    for (int i = 0; i < rs.rank(); ++i) lam[i] = Rat(c(rng));
    RatVec target = rs.weight_root_coords(lam);
    auto xi = deform::solve_xi<double>(rs, p, table, target);
    auto g = deform::grad(rs, p, xi);
    double scale = 1;
    for (int i = 0; i < rs.rank(); ++i)
      scale = std::max(scale, max_abs_coef(xi[i]));
    for (int i = 0; i < rs.rank(); ++i) {
      series::SuperSeries<double> tgt(table,
                                      Cx<double>(target[i].to_double()));
      worst = std::max(worst, max_coef_diff(g[i], tgt) / scale);
    }
  }
  return {worst <= 1e-12, worst};
}

SuiteResult suite_trivial_marking(const lie::RootSystem& rs) {
  engine::PairingSpec spec;
  spec.rs = std::make_shared<lie::RootSystem>(rs.type(), rs.rank(), rs.scale());
  spec.genus = 2;
  spec.truncation = 2;
  spec.summation.radius2 = Rat(60);
  spec.beta.sigmas.emplace_back("sigma1", casimir_poly(rs));
  engine::PairingResult base = engine::sum_pairing<double>(spec);
  spec.markings.push_back(rep::Marking::trivial(*spec.rs));
  engine::PairingResult plus = engine::sum_pairing<double>(spec);
  double worst = 0;
  for (const auto& [key, v] : base.coefficients) {
    auto it = plus.coefficients.find(key);
    if (it == plus.coefficients.end()) return {false, 1.0};
    double scale = std::max({1.0, std::fabs(v.first), std::fabs(v.second)});
    worst = std::max(worst, std::fabs(v.first - it->second.first) / scale);
    worst = std::max(worst, std::fabs(v.second - it->second.second) / scale);
  }
  return {worst <= 1e-12, worst};
}

SuiteResult suite_zeta_volumes() {
  auto rs = std::make_shared<lie::RootSystem>(lie::SimpleType::A, 1);
  double worst = 0;
  for (int s : {2, 3}) {
    engine::PairingSpec spec;
    spec.rs = rs;
    spec.genus = s;
    spec.truncation = 0;
    spec.summation.radius2 = Rat(8000LL * 8000LL, 2);
    engine::PairingResult r = engine::sum_pairing<double>(spec);
    double target = 2.0 * std::pow(rep::vol_g<double>(*rs), 2 * s - 2) *
                    oracles::zeta_even<double>(2 * s - 2);
    worst = std::max(worst,
                     std::fabs(r.coefficients.at("1").first - target));
  }
  return {worst <= 1e-8, worst};
}

int cmd_verify(const std::string& suite, const GroupArgs& g) {
  auto run = [&](const std::string& name,
                 const std::function<SuiteResult()>& fn) {
    SuiteResult r = fn();
    std::printf("%-18s %-22s %s (max err %s)\n", name.c_str(),
                g.type_rank.c_str(), r.pass ? "PASS" : "FAIL",
                io::format_double(r.max_err).c_str());
    return r.pass ? 0 : 1;
  };
  auto rs = g.build();
  if (suite == "orthonormality")
    return run(suite, [&] { return suite_orthonormality(*rs); });
  if (suite == "freudenthal")
    return run(suite, [&] { return suite_freudenthal(*rs); });
  if (suite == "hessian-lemma")
    return run(suite, [&] { return suite_hessian_lemma(*rs); });
  if (suite == "inversion")
    return run(suite, [&] { return suite_inversion(*rs); });
  if (suite == "trivial-marking")
    return run(suite, [&] { return suite_trivial_marking(*rs); });
  if (suite == "zeta-volumes")
    return run(suite, [&] { return suite_zeta_volumes(); });
  std::fprintf(stderr, "error: unknown verify suite '%s'\n", suite.c_str());
  return 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Witten-formula intersection pairings on moduli of flat "
               "bundles"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may appear after the subcommand

  GroupArgs group;
  int threads = 0;
  std::string precision;
  bool allow_e8 = false;
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--precision", precision, "double | extended");
  app.add_flag("--allow-e8", allow_e8,
               "lift the Weyl enumeration budget for E8");

  auto* dims = app.add_subcommand("dims", "Weyl dimension table");
  std::vector<std::string> lambda_list;
  dims->add_option("--group", group.type_rank, "simple type + rank, e.g. A2");
  dims->add_option("--scale", group.scale, "inner-product scale (rational)");
  dims->add_option("--lambda", lambda_list,
                   "weight in fundamental coordinates, e.g. 1,0")
      ->required();

  auto* chr = app.add_subcommand("char", "character value on a class");
  std::string lambda_text, mu_text;
  chr->add_option("--group", group.type_rank, "simple type + rank");
  chr->add_option("--scale", group.scale, "inner-product scale");
  chr->add_option("--lambda", lambda_text, "dominant integral weight")
      ->required();
  chr->add_option("--mu", mu_text, "alcove point (rationals)")->required();

  auto* vols = app.add_subcommand("volumes", "Riemannian/symplectic volumes");
  vols->add_option("--group", group.type_rank, "simple type + rank");
  vols->add_option("--scale", group.scale, "inner-product scale");
  std::string vol_mu;
  vols->add_option("--mu", vol_mu, "optional alcove point");

  auto* pair = app.add_subcommand("pairing", "run a JSON problem file");
  std::string input, out_path;
  pair->add_option("--input", input, "problem JSON")->required();
  pair->add_option("--out", out_path, "result JSON path");

  auto* wvol = app.add_subcommand("witten-volume",
                                  "moduli-space volume (beta = 1)");
  int genus = 2;
  std::string radius = "2000";
  wvol->add_option("--group", group.type_rank, "simple type + rank");
  wvol->add_option("--scale", group.scale, "inner-product scale");
  wvol->add_option("--genus", genus, "genus (>= 2)");
  wvol->add_option("--radius", radius, "weight ball radius");
  wvol->add_option("--out", out_path, "result JSON path");

  auto* verify = app.add_subcommand("verify", "oracle suites");
  std::string suite;
  verify
      ->add_option("--suite", suite,
                   "orthonormality | freudenthal | hessian-lemma | inversion "
                   "| trivial-marking | zeta-volumes")
      ->required();
  verify->add_option("--group", group.type_rank, "simple type + rank");

  CLI11_PARSE(app, argc, argv);

  if (allow_e8) lie::set_default_weyl_budget(700'000'000);

  try {
    if (*dims) return cmd_dims(group, lambda_list);
    if (*chr) return cmd_char(group, lambda_text, mu_text);
    if (*vols) return cmd_volumes(group, vol_mu);
    if (*pair) return cmd_pairing(input, out_path, threads, precision);
    if (*wvol) return cmd_witten_volume(group, genus, radius, out_path, threads);
    if (*verify) return cmd_verify(suite, group);
  } catch (const io::ParseError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
