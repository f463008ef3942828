#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringlat/config.hpp"

namespace ringlat::cli {

struct RunManifest {
  std::string run_id;
  nlohmann::json config_echo;
  std::vector<std::string> outputs;
  std::map<std::string, double> timings_s;
  std::string version;
  std::vector<std::string> failures;  // per-point sweep failures
  int exit_code = 0;
};

struct DispatchOptions {
  std::string out_dir = "out";
  int workers = 1;
  bool strict = false;
};

// Runs one subcommand against a resolved config, writes every output
// atomically under out_dir and finishes with manifest.json. Valid
// subcommands: bands, gs, evolve, experiment, deriv, load-check, lz,
// calibrate, sense, reproduce.
RunManifest dispatch(const std::string& subcommand, const nlohmann::json& raw_config,
                     const DispatchOptions& opts);

}  // namespace ringlat::cli
