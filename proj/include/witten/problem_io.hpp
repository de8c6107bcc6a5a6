// JSON problem files and result emission for the CLI. Rationals travel as
// strings to keep exactness; unknown fields are rejected everywhere.
#pragma once

#include "witten/engine.hpp"

#include <json.hpp>

#include <string>

namespace witten::io {

enum class Precision { Double, Extended };

struct ProblemConfig {
  engine::PairingSpec spec;
  Precision precision = Precision::Double;
};

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

ProblemConfig parse_problem(const nlohmann::json& j);
ProblemConfig parse_problem_text(const std::string& text);

// Result document: {"coefficients": {...}, "diagnostics": {...}}. Wallclock
// is intentionally omitted so identical inputs give identical bytes.
nlohmann::json result_to_json(const engine::PairingResult& r);

// Round-trip validation of an emitted result document.
void validate_result_json(const nlohmann::json& j);

// Exact radius handling: strings parse as rationals; numbers are quantized
// to an exact multiple of 1/4096 before squaring.
Rat radius2_from_json(const nlohmann::json& v);

std::string format_double(double v);

} // namespace witten::io
