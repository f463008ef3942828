#pragma once

#include <optional>
#include <string>

#include "ringlat/analysis.hpp"
#include "ringlat/params.hpp"
#include "ringlat/propagator.hpp"

namespace ringlat {

// Four-step run: prepare the uniform ring state, ramp the lattice on over
// load_time_tL, rotate with eta(t) = s t for rotation_time_tf, record <L_z>.
struct ExperimentConfig {
  RingLatticeParams params;
  double load_time_tL = 1.2;      // units of 1/w_r
  std::optional<double> ramp_rate_s;   // d eta / dt
  std::optional<double> chirp_B;       // linear chirp constant
  std::optional<double> external_acceleration;  // Omega-dot of the platform
  double rotation_time_tf = 0.0;
  int grid_N = 0;                 // 0 -> default grid for this l
  double dt = 5e-3;
  int sample_every = 10;
  bool measure_only_final = false;
  double adiabatic_threshold = 10.0;
};

struct LZReport {
  double gamma = 0.0;
  double T_LZ = 0.0;
  double phi_LZ = 0.0;
  double s_c = 0.0;
  double adiabatic_margin = 0.0;  // s_c / s
};

struct AdiabaticityReport {
  bool ok = false;
  double margin = 0.0;
  double threshold = 10.0;
};

int default_grid_for(const RingLatticeParams& p);

// Total momentum ramp rate implied by the config (chirp plus platform).
double config_ramp_rate(const ExperimentConfig& config);

// Runs the four-step procedure and returns the <L_z> trace over the
// rotation stage. The final measurement needs no free-evolution stage:
// <L_z> is conserved once the lattice is off. Adiabaticity-guard breaches
// are attached to the trace metadata as warnings, never silent.
ObservableTrace run_experiment(const ExperimentConfig& config);

// Overlap of the state after a linear depth ramp of duration t_L with the
// target ground Bloch state at full depth.
double loading_fidelity(const RingLatticeParams& p, double t_L, int grid_N = 0, double dt = 5e-3);

// Depth-ramp adiabaticity: (V/E_r) (hbar/(E_r t_L)) against 32 sqrt(2).
AdiabaticityReport check_loading_adiabaticity(const RingLatticeParams& p, double t_L,
                                              double threshold = 10.0);

// Rotation adiabaticity: margin s_c / s.
AdiabaticityReport check_rotation_adiabaticity(const RingLatticeParams& p, double s,
                                               double threshold = 10.0);

// Zone-edge crossing analytics: gamma, T_LZ = e^{-2 pi gamma}, the
// crossing phase phi_LZ and the critical ramp s_c = pi l V^2/(32 hbar E_r).
LZReport lz_analytics(const RingLatticeParams& p, double s);

// Plateau level after N_B Bloch periods with per-passage loss T:
// -2 l hbar [N_B (1-T)^{N_B} + T sum_{j<N_B} j (1-T)^j].
double staircase_prediction(double T_LZ, int N_B, int azimuthal_l);

}  // namespace ringlat
