#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace rpm::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

/// One invocation of the command-line tool.
struct RunRecord {
  std::string command;
  json parameters = json::object();
  json results = json::object();
  json tolerances = json::object();
  double wall_time = 0;

  json to_json() const;
};

/// Empty when `j` is a well-formed run record; otherwise one message per
/// violation (missing or mistyped field, non-finite number).
std::vector<std::string> validate_run_record(const json& j);

/// JSON text with every floating-point number printed to 17 significant digits.
std::string dump_precise(const json& j, int indent = 2);

/// Parses "a:b:step" into the points a, a + step, ... <= b (inclusive up to
/// rounding). Throws rpm::InvalidArgument on malformed input.
std::vector<double> parse_grid(const std::string& text);

}  // namespace rpm::cli
