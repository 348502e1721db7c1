#include "run_record.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rpm/errors.hpp"

namespace rpm::cli {

namespace {

void check_finite(const json& j, const std::string& path, std::vector<std::string>& out) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) out.push_back(path + ": non-finite number");
  if (j.is_object())
    for (const auto& [k, v] : j.items()) check_finite(v, path + "." + k, out);
  if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], path + "[" + std::to_string(i) + "]", out);
}

void write(const json& j, int indent, int depth, std::string& s) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        s += "{}";
        return;
      }
      s += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) s += ',';
        first = false;
        s += pad + json(k).dump() + colon;
        write(v, indent, depth + 1, s);
      }
      s += close + '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        s += "[]";
        return;
      }
      s += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) s += ',';
        s += pad;
        write(j[i], indent, depth + 1, s);
      }
      s += close + ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        s += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string t = buf;
      if (t.find_first_of(".eEn") == std::string::npos) t += ".0";
      s += t;
      return;
    }
    default:
      s += j.dump();
  }
}

}  // namespace

json RunRecord::to_json() const {
  return json{{"command", command},
              {"parameters", parameters},
              {"results", results},
              {"meta", {{"tool_version", kToolVersion}, {"tolerances", tolerances}, {"wall_time_s", wall_time}}}};
}

std::vector<std::string> validate_run_record(const json& j) {
  std::vector<std::string> out;
  if (!j.is_object()) return {"record is not an object"};
  auto require = [&](const json& parent, const char* key, json::value_t type, const std::string& path) -> bool {
    if (!parent.contains(key)) {
      out.push_back(path + key + ": missing");
      return false;
    }
    const json& v = parent.at(key);
    const bool ok = type == json::value_t::number_float ? v.is_number() : v.type() == type;
    if (!ok) out.push_back(path + key + ": wrong type");
    return ok;
  };
  require(j, "command", json::value_t::string, "");
  require(j, "parameters", json::value_t::object, "");
  require(j, "results", json::value_t::object, "");
  if (require(j, "meta", json::value_t::object, "")) {
    const json& m = j.at("meta");
    require(m, "tool_version", json::value_t::string, "meta.");
    require(m, "tolerances", json::value_t::object, "meta.");
    if (require(m, "wall_time_s", json::value_t::number_float, "meta.") && m.at("wall_time_s").get<double>() < 0)
      out.push_back("meta.wall_time_s: negative");
  }
  for (const auto& [k, v] : j.items())
    if (k != "command" && k != "parameters" && k != "results" && k != "meta") out.push_back(k + ": unexpected field");
  check_finite(j, "record", out);
  return out;
}

std::string dump_precise(const json& j, int indent) {
  std::string s;
  write(j, indent, 0, s);
  return s;
}

std::vector<double> parse_grid(const std::string& text) {
  std::istringstream in(text);
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
    throw InvalidArgument("grid must look like start:stop:step, got '" + text + "'");
  if (!(step > 0) || b < a) throw InvalidArgument("grid needs step > 0 and stop >= start");
  const double count = std::floor((b - a) / step + 1e-9) + 1;
  if (count > 1e6) throw InvalidArgument("grid has more than 10^6 points");
  std::vector<double> g;
  for (int k = 0; k < static_cast<int>(count); ++k) g.push_back(a + k * step);
  return g;
}

}  // namespace rpm::cli
