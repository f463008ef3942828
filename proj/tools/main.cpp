#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringlat/dispatch.hpp"
#include "ringlat/errors.hpp"
#include "ringlat/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ring-lattice band structure, rotation dynamics and sensing toolkit"};
  app.set_version_flag("--version", std::string("ringlat ") + ringlat::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  ringlat::cli::DispatchOptions opts;
  opts.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  unsigned seed = 0;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  app.add_option("--workers", opts.workers, "worker pool size for sweeps")
      ->capture_default_str();
  app.add_flag("--strict", opts.strict, "treat unknown config keys as errors");
  app.add_option("--seed", seed,
                 "reserved; simulations are deterministic and ignore it");

  app.add_subcommand("bands", "band energies over a quasi-momentum grid");
  app.add_subcommand("gs", "ground Bloch state density profile");
  app.add_subcommand("evolve", "rotation-stage evolution from the ground Bloch state");
  app.add_subcommand("experiment", "four-step procedure: prepare, load, rotate, measure");
  app.add_subcommand("deriv", "d<L_z>/dt of a trace plus peak signature");
  app.add_subcommand("load-check", "loading fidelity over a ramp-time grid");
  app.add_subcommand("lz", "zone-edge crossing analytics and two-level integration");
  app.add_subcommand("calibrate", "extract I and V from a chirp run");
  app.add_subcommand("sense", "infer external angular acceleration from two chirp runs");
  app.add_subcommand("reproduce", "run the bundled figure suite and acceptance report");

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json raw = nlohmann::json::object();
    if (subcommand != "reproduce") {
      if (config_path.empty())
        throw ringlat::ValidationError("--config is required for this subcommand");
      std::ifstream in(config_path);
      if (!in) throw ringlat::ValidationError("config file not found: " + config_path);
      try {
        raw = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ringlat::ValidationError("config parse error in " + config_path + ": " + e.what());
      }
    }

    const ringlat::cli::RunManifest manifest = ringlat::cli::dispatch(subcommand, raw, opts);
    for (const auto& f : manifest.failures) std::cerr << f << "\n";
    for (const auto& o : manifest.outputs) std::cout << o << "\n";
    return manifest.exit_code;
  } catch (const ringlat::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const ringlat::DetectionError& e) {
    std::cerr << "detection error: " << e.what() << "\n";
    return 3;
  } catch (const ringlat::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
