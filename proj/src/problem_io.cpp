#include "witten/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace witten::io {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError("unknown field '" + it.key() + "' in " + where);
}

Rat rat_from_json(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return Rat::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
  } catch (const std::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + " must be a rational string or an integer");
}

int int_from_json(const json& v, const std::string& where) {
  if (!v.is_number_integer())
    throw ParseError(where + " must be an integer");
  return v.get<int>();
}

} // namespace

Rat radius2_from_json(const json& v) {
  Rat radius;
  if (v.is_string() || v.is_number_integer()) {
    radius = rat_from_json(v, "summation.radius");
  } else if (v.is_number_float()) {
    double d = v.get<double>();
    if (!(d >= 0) || d > 2e8)
      throw ParseError("summation.radius out of range");
    radius = Rat(static_cast<std::int64_t>(std::llround(d * 4096.0)), 4096);
  } else {
    throw ParseError("summation.radius must be a number or rational string");
  }
  if (radius.sign() < 0) throw ParseError("summation.radius must be >= 0");
  return radius * radius;
}

ProblemConfig parse_problem(const json& j) {
  check_keys(j, {"group", "genus", "markings", "deformation", "beta",
                 "truncation", "summation"},
             "problem");
  if (!j.contains("group")) throw ParseError("problem needs a 'group'");
  const json& g = j.at("group");
  check_keys(g, {"type", "rank", "scale"}, "group");
  if (!g.contains("type") || !g.at("type").is_string() ||
      g.at("type").get<std::string>().size() != 1)
    throw ParseError("group.type must be a single letter A..G");
  int rank = int_from_json(g.value("rank", json(0)), "group.rank");
  Rat scale =
      g.contains("scale") ? rat_from_json(g.at("scale"), "group.scale") : Rat(1);

  ProblemConfig cfg;
  try {
    lie::SimpleType type = lie::parse_type(g.at("type").get<std::string>()[0]);
    cfg.spec.rs = std::make_shared<lie::RootSystem>(type, rank, scale);
  } catch (const std::exception& e) {
    throw ParseError(std::string("group: ") + e.what());
  }
  const lie::RootSystem& rs = *cfg.spec.rs;

  cfg.spec.genus = int_from_json(j.value("genus", json(0)), "genus");

  if (j.contains("markings")) {
    if (!j.at("markings").is_array())
      throw ParseError("markings must be an array");
    for (const json& m : j.at("markings")) {
      check_keys(m, {"mu", "Q"}, "marking");
      if (!m.contains("mu") || !m.at("mu").is_array() ||
          m.at("mu").size() != static_cast<std::size_t>(rs.rank()))
        throw ParseError("marking.mu must list rank rationals");
      lie::Weight mu(rs.rank());
      for (int i = 0; i < rs.rank(); ++i)
        mu[i] = rat_from_json(m.at("mu")[i], "marking.mu");
      RatPoly q = RatPoly::constant(rs.rank(), Rat(1));
      if (m.contains("Q")) {
        if (!m.at("Q").is_string())
          throw ParseError("marking.Q must be a polynomial string");
        q = poly_from_spec(rs, m.at("Q").get<std::string>());
      }
      try {
        cfg.spec.markings.push_back(rep::Marking::make(rs, mu, std::move(q)));
      } catch (const std::exception& e) {
        throw ParseError(std::string("marking: ") + e.what());
      }
    }
  }

  std::set<std::string> names;
  if (j.contains("deformation")) {
    if (!j.at("deformation").is_array())
      throw ParseError("deformation must be an array");
    for (const json& d : j.at("deformation")) {
      check_keys(d, {"name", "poly"}, "deformation entry");
      if (!d.contains("name") || !d.at("name").is_string() ||
          !d.contains("poly") || !d.at("poly").is_string())
        throw ParseError("deformation entries need 'name' and 'poly' strings");
      std::string name = d.at("name").get<std::string>();
      if (!names.insert(name).second)
        throw ParseError("duplicate generator name " + name);
      cfg.spec.deformation.emplace_back(
          name, poly_from_spec(rs, d.at("poly").get<std::string>()));
    }
  }

  if (j.contains("beta")) {
    const json& b = j.at("beta");
    check_keys(b, {"sigmas", "handles"}, "beta");
    if (b.contains("sigmas")) {
      if (!b.at("sigmas").is_array())
        throw ParseError("beta.sigmas must be an array");
      for (const json& s : b.at("sigmas")) {
        check_keys(s, {"name", "poly"}, "sigma entry");
        if (!s.contains("name") || !s.at("name").is_string() ||
            !s.contains("poly") || !s.at("poly").is_string())
          throw ParseError("sigma entries need 'name' and 'poly' strings");
        std::string name = s.at("name").get<std::string>();
        if (!names.insert(name).second)
          throw ParseError("duplicate generator name " + name);
        cfg.spec.beta.sigmas.emplace_back(
            name, poly_from_spec(rs, s.at("poly").get<std::string>()));
      }
    }
    if (b.contains("handles")) {
      if (!b.at("handles").is_array())
        throw ParseError("beta.handles must be an array");
      for (const json& h : b.at("handles")) {
        check_keys(h, {"eps1", "eps2"}, "handle");
        engine::BetaHandleSpec hs;
        for (const char* side : {"eps1", "eps2"}) {
          if (!h.contains(side)) continue;
          if (!h.at(side).is_array())
            throw ParseError(std::string("handle.") + side +
                             " must be an array of polynomial strings");
          for (const json& p : h.at(side)) {
            if (!p.is_string())
              throw ParseError("handle polynomials must be strings");
            (side[3] == '1' ? hs.eps1 : hs.eps2)
                .push_back(poly_from_spec(rs, p.get<std::string>()));
          }
        }
        cfg.spec.beta.handles.push_back(std::move(hs));
      }
    }
  }

  if (j.contains("truncation"))
    cfg.spec.truncation = int_from_json(j.at("truncation"), "truncation");
  if (cfg.spec.truncation < 0 || cfg.spec.truncation > 16)
    throw ParseError("truncation must be in 0..16");

  if (j.contains("summation")) {
    const json& s = j.at("summation");
    check_keys(s,
               {"mode", "radius", "tolerance", "epsilons", "precision",
                "accelerate", "threads", "term_budget"},
               "summation");
    engine::SummationOptions& opt = cfg.spec.summation;
    if (s.contains("mode")) {
      std::string mode = s.at("mode").get<std::string>();
      if (mode == "truncate")
        opt.mode = engine::SummationOptions::Mode::Truncate;
      else if (mode == "convergence_factor")
        opt.mode = engine::SummationOptions::Mode::ConvergenceFactor;
      else if (mode == "auto")
        opt.mode = engine::SummationOptions::Mode::Auto;
      else
        throw ParseError("summation.mode must be 'auto', 'truncate' or "
                         "'convergence_factor'");
    }
    if (s.contains("radius")) opt.radius2 = radius2_from_json(s.at("radius"));
    if (s.contains("tolerance")) {
      if (!s.at("tolerance").is_number())
        throw ParseError("summation.tolerance must be a number");
      opt.tolerance = s.at("tolerance").get<double>();
    }
    if (s.contains("epsilons")) {
      if (!s.at("epsilons").is_array())
        throw ParseError("summation.epsilons must be an array of numbers");
      for (const json& e : s.at("epsilons")) {
        if (!e.is_number() || e.get<double>() <= 0)
          throw ParseError("summation.epsilons must be positive numbers");
        opt.epsilons.push_back(e.get<double>());
      }
    }
    if (s.contains("accelerate")) {
      if (!s.at("accelerate").is_boolean())
        throw ParseError("summation.accelerate must be a boolean");
      opt.accelerate = s.at("accelerate").get<bool>();
    }
    if (s.contains("threads"))
      opt.threads = int_from_json(s.at("threads"), "summation.threads");
    if (s.contains("term_budget")) {
      if (!s.at("term_budget").is_number_integer())
        throw ParseError("summation.term_budget must be an integer");
      opt.term_budget = s.at("term_budget").get<long long>();
    }
    if (s.contains("precision")) {
      std::string p = s.at("precision").get<std::string>();
      if (p == "double")
        cfg.precision = Precision::Double;
      else if (p == "extended")
        cfg.precision = Precision::Extended;
      else
        throw ParseError("summation.precision must be 'double' or 'extended'");
    }
  }

  try {
    cfg.spec.validate();
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

ProblemConfig parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(j);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json result_to_json(const engine::PairingResult& r) {
  json coeffs = json::object();
  for (const auto& [key, v] : r.coefficients)
    coeffs[key] = json::array({v.first, v.second});
  json diag = json::object();
  diag["mode"] = r.mode;
  diag["terms_summed"] = r.terms_summed;
  diag["tail_bound"] = r.tail_bound;
  diag["extrapolation_residual"] = r.extrapolation_residual;
  diag["divergent"] = r.divergent;
  json trace = json::array();
  for (const auto& [x, table] : r.trace) {
    json t = json::object();
    for (const auto& [key, v] : table)
      t[key] = json::array({v.first, v.second});
    trace.push_back(json::array({x, t}));
  }
  diag["trace"] = trace;
  json out = json::object();
  out["coefficients"] = coeffs;
  out["diagnostics"] = diag;
  return out;
}

void validate_result_json(const json& j) {
  check_keys(j, {"coefficients", "diagnostics"}, "result");
  if (!j.contains("coefficients") || !j.at("coefficients").is_object())
    throw ParseError("result.coefficients must be an object");
  for (auto it = j.at("coefficients").begin(); it != j.at("coefficients").end();
       ++it)
    if (!it.value().is_array() || it.value().size() != 2 ||
        !it.value()[0].is_number() || !it.value()[1].is_number())
      throw ParseError("result coefficients must be [re, im] pairs");
  if (!j.contains("diagnostics") || !j.at("diagnostics").is_object())
    throw ParseError("result.diagnostics must be an object");
  check_keys(j.at("diagnostics"),
             {"mode", "terms_summed", "tail_bound", "extrapolation_residual",
              "divergent", "trace"},
             "diagnostics");
}

} // namespace witten::io
