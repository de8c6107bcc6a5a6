#include <doctest.h>

#include "witten/problem_io.hpp"

using namespace witten;
using nlohmann::json;

namespace {

const char* kVolumeProblem = R"json({
  "group": {"type": "A", "rank": 1},
  "genus": 2,
  "truncation": 0,
  "summation": {"mode": "truncate", "radius": 1000, "tolerance": 1e-9}
})json";

} // namespace

TEST_CASE("problem parse: minimal volume problem") {
  io::ProblemConfig cfg = io::parse_problem_text(kVolumeProblem);
  CHECK(cfg.spec.rs->label() == "A1");
  CHECK(cfg.spec.genus == 2);
  CHECK(cfg.spec.truncation == 0);
  CHECK(cfg.spec.summation.radius2 == Rat(1000000));
  CHECK(cfg.precision == io::Precision::Double);
}

TEST_CASE("problem parse: full problem with markings and beta") {
  json j = json::parse(R"json({
    "group": {"type": "A", "rank": 2, "scale": "1"},
    "genus": 1,
    "markings": [{"mu": ["1/3", "1/5"], "Q": "casimir"}],
    "deformation": [{"name": "delta1", "poly": "power_sum(3)"}],
    "beta": {
      "sigmas": [{"name": "sigma1", "poly": "casimir"}],
      "handles": [{"eps1": ["casimir"], "eps2": ["power_sum(3)"]}]
    },
    "truncation": 3,
    "summation": {"mode": "convergence_factor", "radius": "20",
                   "epsilons": [0.1, 0.05], "precision": "extended"}
  })json");
  io::ProblemConfig cfg = io::parse_problem(j);
  CHECK(cfg.spec.markings.size() == 1);
  CHECK(cfg.spec.deformation.size() == 1);
  CHECK(cfg.spec.beta.sigmas.size() == 1);
  CHECK(cfg.spec.beta.handles.size() == 1);
  CHECK(cfg.precision == io::Precision::Extended);
  CHECK(cfg.spec.summation.mode ==
        engine::SummationOptions::Mode::ConvergenceFactor);
  CHECK(cfg.spec.summation.epsilons.size() == 2);
}

TEST_CASE("problem parse rejects junk") {
  // unknown field
  CHECK_THROWS_AS(io::parse_problem_text(R"json({"group": {"type":"A","rank":1},
    "genus": 2, "bogus": 1})json"),
                  io::ParseError);
  // malformed rational
  CHECK_THROWS_AS(io::parse_problem_text(R"json({"group": {"type":"A","rank":1,
    "scale": "1/0"}, "genus": 2})json"),
                  io::ParseError);
  // bad group
  CHECK_THROWS_AS(io::parse_problem_text(R"json({"group": {"type":"Q","rank":1},
    "genus": 2})json"),
                  io::ParseError);
  // mu arity
  CHECK_THROWS_AS(io::parse_problem_text(R"json({"group": {"type":"A","rank":2},
    "genus": 2, "markings": [{"mu": ["1/3"]}]})json"),
                  io::ParseError);
  // float where a rational is required
  CHECK_THROWS_AS(io::parse_problem_text(R"json({"group": {"type":"A","rank":1},
    "genus": 2, "markings": [{"mu": [0.5]}]})json"),
                  io::ParseError);
  // genus regime violation
  CHECK_THROWS_AS(io::parse_problem_text(R"json({"group": {"type":"A","rank":1},
    "genus": 1})json"),
                  io::ParseError);
  // invalid JSON at all
  CHECK_THROWS_AS(io::parse_problem_text("{nope"), io::ParseError);
}

TEST_CASE("result round trip") {
  io::ProblemConfig cfg = io::parse_problem_text(kVolumeProblem);
  cfg.spec.summation.radius2 = Rat(5000); // keep it quick
  engine::PairingResult r = engine::sum_pairing<double>(cfg.spec);
  json out = io::result_to_json(r);
  CHECK_NOTHROW(io::validate_result_json(out));
  // the document re-parses to the same coefficients
  json again = json::parse(out.dump(2));
  CHECK(again.at("coefficients").at("1")[0].get<double>() ==
        r.coefficients.at("1").first);
  CHECK(!out.contains("wallclock"));
  CHECK(!out.at("diagnostics").contains("wallclock"));
}

TEST_CASE("radius quantization is exact and deterministic") {
  CHECK(io::radius2_from_json(json("3/2")) == Rat(9, 4));
  CHECK(io::radius2_from_json(json(10)) == Rat(100));
  // floats quantize to multiples of 1/4096 before squaring
  Rat r2 = io::radius2_from_json(json(0.5));
  CHECK(r2 == Rat(2048 * 2048, 4096LL * 4096));
  CHECK_THROWS_AS(io::radius2_from_json(json("-2")), io::ParseError);
}
