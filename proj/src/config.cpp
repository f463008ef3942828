#include "ringlat/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

#include "ringlat/errors.hpp"

namespace ringlat::cli {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed, bool strict,
                std::vector<std::string>& warnings) {
  if (!obj.is_object()) throw ValidationError(section + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.count(key)) continue;
    const std::string msg = "unknown key: " + section + "." + key;
    if (strict) throw ValidationError(msg);
    warnings.push_back(msg);
  }
}

double require_number(const json& obj, const std::string& section, const std::string& key) {
  if (!obj.contains(key)) throw ValidationError(section + "." + key + ": missing required value");
  if (!obj[key].is_number()) throw ValidationError(section + "." + key + ": expected a number");
  return obj[key].get<double>();
}

std::optional<double> optional_number(const json& obj, const std::string& section,
                                      const std::string& key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_number()) throw ValidationError(section + "." + key + ": expected a number");
  return obj[key].get<double>();
}

// Accepts a plain number or a "<number> t_B" string.
double resolve_time(const json& value, const std::string& where, double t_B) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    static const std::regex pattern(R"(^\s*([-+0-9.eE]+)\s*t_B\s*$)");
    std::smatch m;
    const std::string s = value.get<std::string>();
    if (std::regex_match(s, m, pattern)) {
      const double mult = std::stod(m[1].str());
      if (!std::isfinite(t_B))
        throw ValidationError(where + ": cannot resolve t_B units with zero net ramp");
      return mult * t_B;
    }
    throw ValidationError(where + ": unrecognized time expression '" + s + "'");
  }
  throw ValidationError(where + ": expected a number or a 't_B' expression");
}

}  // namespace

std::string content_hash(const std::string& content) {
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : content) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResolvedConfig parse_config_json(const json& doc, bool strict) {
  ResolvedConfig rc;
  if (!doc.is_object()) throw ValidationError("config root must be a JSON object");
  check_keys(doc, "config", {"model", "schedule", "numerics", "analysis", "sweep"}, strict,
             rc.warnings);

  // --- model ---
  if (!doc.contains("model")) throw ValidationError("model: section is required");
  const json& model = doc["model"];
  check_keys(model, "model", {"l", "V", "I", "units", "hbar"}, strict, rc.warnings);
  if (!model.contains("l") || !model["l"].is_number_integer())
    throw ValidationError("model.l: azimuthal index must be an integer");
  const int l = model["l"].get<int>();
  if (l < 1) throw ValidationError("model.l: azimuthal_l must be >= 1");
  const double V = require_number(model, "model", "V");
  if (V < 0.0) throw ValidationError("model.V: depth_V must be >= 0");

  std::string units = "dimensionless";
  if (model.contains("units")) {
    if (!model["units"].is_string())
      throw ValidationError("model.units: expected \"dimensionless\" or \"physical\"");
    units = model["units"].get<std::string>();
  }

  double time_scale = 1.0;  // input time units per 1/w_r
  if (units == "dimensionless") {
    const double I = optional_number(model, "model", "I").value_or(0.5 * l * l);
    if (!(I > 0.0)) throw ValidationError("model.I: inertia_I must be > 0");
    rc.params = make_params(I, V, l, UnitSystem::dimensionless());
  } else if (units == "physical") {
    const double hbar = require_number(model, "model", "hbar");
    const double I = require_number(model, "model", "I");
    if (!(I > 0.0)) throw ValidationError("model.I: inertia_I must be > 0");
    const RingLatticeParams physical = make_params(I, V, l, UnitSystem::physical(hbar));
    rc.params = to_dimensionless(physical);
    time_scale = rc.params.units.time_scale;
  } else {
    throw ValidationError("model.units: expected \"dimensionless\" or \"physical\"");
  }

  // --- schedule ---
  const json schedule = doc.contains("schedule") ? doc["schedule"] : json::object();
  check_keys(schedule, "schedule", {"s", "B", "B2", "omega_dot", "t_f", "t_L"}, strict,
             rc.warnings);
  rc.ramp_rate_s = optional_number(schedule, "schedule", "s");
  rc.chirp_B = optional_number(schedule, "schedule", "B");
  rc.chirp_B2 = optional_number(schedule, "schedule", "B2");
  rc.omega_dot = optional_number(schedule, "schedule", "omega_dot");
  if (rc.ramp_rate_s && rc.chirp_B)
    throw ValidationError("schedule: s and B are mutually exclusive");
  if (rc.omega_dot && rc.ramp_rate_s)
    throw ValidationError("schedule: with omega_dot, prescribe the chirp B rather than s");

  // Convert physical-time inputs to recoil units.
  if (rc.ramp_rate_s) *rc.ramp_rate_s *= time_scale;
  if (rc.chirp_B) *rc.chirp_B *= time_scale * time_scale;
  if (rc.chirp_B2) *rc.chirp_B2 *= time_scale * time_scale;
  if (rc.omega_dot) *rc.omega_dot *= time_scale * time_scale;

  // Net momentum ramp rate and the Bloch period it implies.
  double s_total = 0.0;
  if (rc.ramp_rate_s) s_total += *rc.ramp_rate_s;
  if (rc.chirp_B) s_total += rc.params.inertia_I * (*rc.chirp_B) / (2.0 * l * rc.params.hbar);
  if (rc.omega_dot) s_total -= rc.params.inertia_I * (*rc.omega_dot) / rc.params.hbar;
  rc.t_B = s_total != 0.0 ? 2.0 * l / std::abs(s_total)
                          : std::numeric_limits<double>::infinity();

  if (schedule.contains("t_f")) {
    rc.t_f = resolve_time(schedule["t_f"], "schedule.t_f", rc.t_B);
    if (schedule["t_f"].is_number()) rc.t_f /= time_scale;
  }
  if (schedule.contains("t_L")) {
    rc.t_L = resolve_time(schedule["t_L"], "schedule.t_L", rc.t_B);
    if (schedule["t_L"].is_number()) rc.t_L /= time_scale;
  }
  if (rc.t_f < 0.0) throw ValidationError("schedule.t_f: must be >= 0");
  if (rc.t_L < 0.0) throw ValidationError("schedule.t_L: must be >= 0");

  // --- numerics ---
  const json numerics = doc.contains("numerics") ? doc["numerics"] : json::object();
  check_keys(numerics, "numerics", {"grid_N", "dt", "k_max", "sample_every"}, strict,
             rc.warnings);
  if (numerics.contains("grid_N")) rc.numerics.grid_N = numerics["grid_N"].get<int>();
  if (numerics.contains("dt")) rc.numerics.dt = require_number(numerics, "numerics", "dt");
  if (numerics.contains("k_max")) rc.numerics.k_max = numerics["k_max"].get<int>();
  if (numerics.contains("sample_every"))
    rc.numerics.sample_every = numerics["sample_every"].get<int>();
  if (rc.numerics.grid_N != 0 &&
      (rc.numerics.grid_N < 2 || rc.numerics.grid_N % (2 * l) != 0))
    throw ValidationError("numerics.grid_N: must be a positive multiple of 2 l");
  if (!(rc.numerics.dt > 0.0)) throw ValidationError("numerics.dt: must be > 0");
  if (rc.numerics.k_max < 8) throw ValidationError("numerics.k_max: must be >= 8");
  if (rc.numerics.sample_every < 1)
    throw ValidationError("numerics.sample_every: must be >= 1");

  // --- analysis ---
  const json analysis = doc.contains("analysis") ? doc["analysis"] : json::object();
  check_keys(analysis, "analysis",
             {"peak_threshold", "q_min", "q_max", "q_points", "n_max", "t_L_values",
              "input_trace"},
             strict, rc.warnings);
  if (analysis.contains("peak_threshold"))
    rc.analysis.peak_threshold = require_number(analysis, "analysis", "peak_threshold");
  rc.analysis.q_min = -static_cast<double>(l);
  rc.analysis.q_max = +static_cast<double>(l);
  if (analysis.contains("q_min") || analysis.contains("q_max")) {
    rc.analysis.q_min = optional_number(analysis, "analysis", "q_min").value_or(rc.analysis.q_min);
    rc.analysis.q_max = optional_number(analysis, "analysis", "q_max").value_or(rc.analysis.q_max);
    rc.analysis.q_range_given = true;
  }
  if (analysis.contains("q_points")) rc.analysis.q_points = analysis["q_points"].get<int>();
  if (analysis.contains("n_max")) rc.analysis.n_max = analysis["n_max"].get<int>();
  if (analysis.contains("t_L_values")) {
    if (!analysis["t_L_values"].is_array())
      throw ValidationError("analysis.t_L_values: expected an array of times");
    for (const auto& v : analysis["t_L_values"])
      rc.analysis.t_L_values.push_back(v.get<double>() / time_scale);
  }
  if (analysis.contains("input_trace"))
    rc.analysis.input_trace = analysis["input_trace"].get<std::string>();
  if (rc.analysis.q_points < 2) throw ValidationError("analysis.q_points: must be >= 2");
  if (rc.analysis.n_max < 0) throw ValidationError("analysis.n_max: must be >= 0");
  if (!(rc.analysis.q_max > rc.analysis.q_min))
    throw ValidationError("analysis.q_max: must exceed analysis.q_min");

  // --- sweep ---
  if (doc.contains("sweep") && !doc["sweep"].is_null()) {
    const json& sweep = doc["sweep"];
    check_keys(sweep, "sweep", {"param", "values"}, strict, rc.warnings);
    SweepSpec spec;
    if (!sweep.contains("param") || !sweep["param"].is_string())
      throw ValidationError("sweep.param: expected a dotted key path string");
    spec.param = sweep["param"].get<std::string>();
    if (!sweep.contains("values") || !sweep["values"].is_array() || sweep["values"].empty())
      throw ValidationError("sweep.values: expected a non-empty array of numbers");
    for (const auto& v : sweep["values"]) {
      if (!v.is_number()) throw ValidationError("sweep.values: expected numbers");
      spec.values.push_back(v.get<double>());
    }
    rc.sweep = spec;
  }

  // --- echo with defaults filled (all in recoil units) ---
  json echo;
  echo["model"] = {{"l", l},
                   {"V", rc.params.depth_V},
                   {"I", rc.params.inertia_I},
                   {"units", "dimensionless"}};
  json sched_echo;
  if (rc.ramp_rate_s) sched_echo["s"] = *rc.ramp_rate_s;
  if (rc.chirp_B) sched_echo["B"] = *rc.chirp_B;
  if (rc.chirp_B2) sched_echo["B2"] = *rc.chirp_B2;
  if (rc.omega_dot) sched_echo["omega_dot"] = *rc.omega_dot;
  sched_echo["t_f"] = rc.t_f;
  sched_echo["t_L"] = rc.t_L;
  echo["schedule"] = sched_echo;
  echo["numerics"] = {{"grid_N", rc.numerics.grid_N},
                      {"dt", rc.numerics.dt},
                      {"k_max", rc.numerics.k_max},
                      {"sample_every", rc.numerics.sample_every}};
  echo["analysis"] = {{"peak_threshold", rc.analysis.peak_threshold},
                      {"q_min", rc.analysis.q_min},
                      {"q_max", rc.analysis.q_max},
                      {"q_points", rc.analysis.q_points},
                      {"n_max", rc.analysis.n_max}};
  if (!rc.analysis.t_L_values.empty()) echo["analysis"]["t_L_values"] = rc.analysis.t_L_values;
  if (!rc.analysis.input_trace.empty()) echo["analysis"]["input_trace"] = rc.analysis.input_trace;
  if (rc.sweep) echo["sweep"] = {{"param", rc.sweep->param}, {"values", rc.sweep->values}};
  rc.echo = echo;
  rc.fingerprint = content_hash(echo.dump());
  return rc;
}

ResolvedConfig parse_config(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config file not found: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config parse error in " + path + ": " + e.what());
  }
  return parse_config_json(doc, strict);
}

}  // namespace ringlat::cli
