#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringlat/params.hpp"

namespace ringlat::cli {

struct NumericsConfig {
  int grid_N = 0;  // 0 -> per-l default
  double dt = 5e-3;
  int k_max = 32;
  int sample_every = 10;
};

struct AnalysisConfig {
  double peak_threshold = 5.0;
  double q_min = 0.0;       // defaults to -l
  double q_max = 0.0;       // defaults to +l
  int q_points = 161;
  int n_max = 5;
  std::vector<double> t_L_values;
  std::string input_trace;
  bool q_range_given = false;
};

struct SweepSpec {
  std::string param;  // dotted path, e.g. "schedule.s"
  std::vector<double> values;
};

// Configuration with every default filled and all quantities converted to
// recoil units (hbar = 1, energies in E_r, times in 1/w_r).
struct ResolvedConfig {
  RingLatticeParams params;
  std::optional<double> ramp_rate_s;
  std::optional<double> chirp_B;
  std::optional<double> omega_dot;
  std::optional<double> chirp_B2;  // second chirp for sensing runs
  double t_f = 0.0;
  double t_L = 1.2;
  double t_B = 0.0;  // resolved Bloch period (inf when no net ramp)
  NumericsConfig numerics;
  AnalysisConfig analysis;
  std::optional<SweepSpec> sweep;
  nlohmann::json echo;
  std::string fingerprint;
  std::vector<std::string> warnings;
};

// Parses, validates and resolves a JSON config document. strict turns
// unknown keys into errors instead of warnings.
ResolvedConfig parse_config_json(const nlohmann::json& doc, bool strict = false);
ResolvedConfig parse_config(const std::string& path, bool strict = false);

// FNV-1a 64-bit content hash, hex encoded.
std::string content_hash(const std::string& content);

}  // namespace ringlat::cli
