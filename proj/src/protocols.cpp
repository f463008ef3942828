#include "ringlat/protocols.hpp"

#include <cmath>
#include <string>

#include "ringlat/bands.hpp"
#include "ringlat/errors.hpp"
#include "ringlat/special.hpp"

namespace ringlat {

namespace {

WaveFunction uniform_ring_state(int N) {
  WaveFunction psi;
  psi.amplitudes = Eigen::VectorXcd::Constant(N, 1.0 / std::sqrt(2.0 * M_PI));
  return psi;
}

DriveSchedule loading_schedule(const RingLatticeParams& p, double t_L) {
  DriveSchedule s;
  if (t_L > 0.0) {
    s.depth = PiecewiseLinearProgram(
        {{-t_L, 0.0, p.depth_V / t_L}, {0.0, p.depth_V, 0.0}});
  } else {
    s.depth = PiecewiseLinearProgram::constant(p.depth_V);
  }
  return s;
}

DriveSchedule rotation_schedule(const RingLatticeParams& p, double chirp_B, double omega_dot) {
  DriveSchedule s;
  s.depth = PiecewiseLinearProgram::constant(p.depth_V);
  s.chirp = PiecewiseLinearProgram::linear(0.0, -chirp_B);
  s.rotation = PiecewiseLinearProgram::linear(0.0, omega_dot);
  s.chirp_origin_t0 = 0.0;
  return s;
}

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

int default_grid_for(const RingLatticeParams& p) {
  // >= 64 sites-worth of modes per l, power-of-two friendly, commensurate.
  int n = std::max(256, 64 * p.azimuthal_l);
  const int step = 2 * p.azimuthal_l;
  if (n % step != 0) n += step - n % step;
  return n;
}

double config_ramp_rate(const ExperimentConfig& config) {
  const RingLatticeParams& p = config.params;
  double s = 0.0;
  if (config.chirp_B)
    s += config.params.inertia_I * (*config.chirp_B) / (2.0 * p.azimuthal_l * p.hbar);
  if (config.ramp_rate_s) s += *config.ramp_rate_s;
  if (config.external_acceleration)
    s -= config.params.inertia_I * (*config.external_acceleration) / p.hbar;
  return s;
}

ObservableTrace run_experiment(const ExperimentConfig& config) {
  const RingLatticeParams& p = config.params;
  if (config.load_time_tL < 0.0) throw ValidationError("load_time_tL must be >= 0");
  if (config.rotation_time_tf < 0.0) throw ValidationError("rotation_time_tf must be >= 0");
  if (config.external_acceleration) {
    if (!config.chirp_B || config.ramp_rate_s)
      throw ValidationError("external acceleration runs prescribe the chirp constant B only");
  } else if (config.ramp_rate_s.has_value() == config.chirp_B.has_value()) {
    throw ValidationError("exactly one of ramp_rate_s and chirp_B must be given");
  }

  const int N = config.grid_N > 0 ? config.grid_N : default_grid_for(p);

  // Chirp constant equivalent to the requested ramp rate: s = I B / (2 l hbar).
  const double B = config.chirp_B
                       ? *config.chirp_B
                       : 2.0 * p.azimuthal_l * p.hbar * (*config.ramp_rate_s) / p.inertia_I;
  const double omega_dot = config.external_acceleration.value_or(0.0);
  const double s_total = config_ramp_rate(config);

  EvolveOptions opts;
  opts.dt = config.dt;
  opts.sample_every = config.sample_every;
  opts.frame = Frame::Corotating;

  // (i)+(ii): uniform ring state, lattice ramped on; no rotation yet, so
  // lab and co-rotating frames coincide.
  WaveFunction state = uniform_ring_state(N);
  if (config.load_time_tL > 0.0 && p.depth_V > 0.0) {
    EvolveOptions load_opts = opts;
    load_opts.store_states = true;
    const DriveSchedule loading = loading_schedule(p, config.load_time_tL);
    Trajectory load = evolve(state, p, loading, -config.load_time_tL, 0.0, load_opts);
    state = load.final_state();
  }

  // (iii): rotation stage with eta(t) = s t.
  ObservableTrace trace;
  trace.value_name = "Lz_hbar";
  const DriveSchedule rotation = rotation_schedule(p, B, omega_dot);
  EvolveOptions rot_opts = opts;
  rot_opts.store_states = false;
  Trajectory rot = evolve(state, p, rotation, 0.0, config.rotation_time_tf, rot_opts);

  // (iv): <L_z> in the lab frame; the frame map is a rigid rotation, so the
  // recorded momentum values already are the lab values.
  if (config.measure_only_final) {
    trace.times = {rot.times.back()};
    trace.values = {rot.Lz.back()};
  } else {
    trace.times = rot.times;
    trace.values = rot.Lz;
  }

  trace.metadata["l"] = std::to_string(p.azimuthal_l);
  trace.metadata["I"] = fmt(p.inertia_I);
  trace.metadata["V"] = fmt(p.depth_V);
  trace.metadata["B"] = fmt(B);
  trace.metadata["s"] = fmt(s_total);
  trace.metadata["t_L"] = fmt(config.load_time_tL);
  trace.metadata["frame"] = "lab";

  const AdiabaticityReport load_guard =
      check_loading_adiabaticity(p, config.load_time_tL, config.adiabatic_threshold);
  if (!load_guard.ok)
    trace.metadata["warning_loading"] =
        "loading adiabaticity margin " + fmt(load_guard.margin) + " below threshold";
  const AdiabaticityReport rot_guard =
      check_rotation_adiabaticity(p, std::abs(s_total), config.adiabatic_threshold);
  if (!rot_guard.ok)
    trace.metadata["warning_rotation"] =
        "rotation adiabaticity margin " + fmt(rot_guard.margin) + " below threshold";
  return trace;
}

double loading_fidelity(const RingLatticeParams& p, double t_L, int grid_N, double dt) {
  if (!(t_L > 0.0)) throw ValidationError("t_L must be > 0");
  const int N = grid_N > 0 ? grid_N : default_grid_for(p);
  if (p.depth_V == 0.0) return 1.0;

  WaveFunction state = uniform_ring_state(N);
  EvolveOptions opts;
  opts.dt = dt;
  opts.store_states = true;
  const DriveSchedule loading = loading_schedule(p, t_L);
  Trajectory traj = evolve(state, p, loading, -t_L, 0.0, opts);

  const WaveFunction target = bloch_state_on_ring(p, {0, 0, 0.0}, N);
  const std::complex<double> ov = inner_product(target, traj.final_state());
  return std::norm(ov);
}

AdiabaticityReport check_loading_adiabaticity(const RingLatticeParams& p, double t_L,
                                              double threshold) {
  AdiabaticityReport rep;
  rep.threshold = threshold;
  if (p.depth_V == 0.0) {
    rep.margin = std::numeric_limits<double>::infinity();
    rep.ok = true;
    return rep;
  }
  if (!(t_L > 0.0)) {
    rep.margin = 0.0;
    rep.ok = false;
    return rep;
  }
  const double lhs = (p.depth_V / p.recoil_energy_Er) *
                     (p.hbar / (p.recoil_energy_Er * t_L));
  rep.margin = 32.0 * std::sqrt(2.0) / lhs;
  rep.ok = rep.margin >= threshold;
  return rep;
}

AdiabaticityReport check_rotation_adiabaticity(const RingLatticeParams& p, double s,
                                               double threshold) {
  AdiabaticityReport rep;
  rep.threshold = threshold;
  if (!(s > 0.0)) {
    rep.margin = std::numeric_limits<double>::infinity();
    rep.ok = true;
    return rep;
  }
  if (p.depth_V == 0.0) {
    rep.margin = 0.0;
    rep.ok = false;
    return rep;
  }
  const double s_c =
      M_PI * p.azimuthal_l * p.depth_V * p.depth_V / (32.0 * p.hbar * p.recoil_energy_Er);
  rep.margin = s_c / s;
  rep.ok = rep.margin >= threshold;
  return rep;
}

LZReport lz_analytics(const RingLatticeParams& p, double s) {
  if (!(s > 0.0)) throw ValidationError("ramp rate s must be > 0");
  if (!(p.depth_V > 0.0)) throw ValidationError("depth_V must be > 0");
  LZReport rep;
  const double quarter_V = 0.25 * p.depth_V;
  rep.gamma = quarter_V * quarter_V /
              (p.hbar * 4.0 * p.recoil_energy_Er * s / p.azimuthal_l);
  rep.T_LZ = std::exp(-2.0 * M_PI * rep.gamma);
  rep.phi_LZ = 0.25 * M_PI + arg_gamma_one_minus_i(rep.gamma) +
               rep.gamma * (std::log(rep.gamma) - 1.0);
  rep.s_c = M_PI * p.azimuthal_l * p.depth_V * p.depth_V /
            (32.0 * p.hbar * p.recoil_energy_Er);
  rep.adiabatic_margin = rep.s_c / s;
  return rep;
}

double staircase_prediction(double T_LZ, int N_B, int azimuthal_l) {
  if (!(T_LZ >= 0.0 && T_LZ <= 1.0)) throw ValidationError("T_LZ must lie in [0, 1]");
  if (N_B < 0) throw ValidationError("N_B must be >= 0");
  const double R = 1.0 - T_LZ;
  double sum = 0.0;
  for (int j = 0; j < N_B; ++j) sum += j * std::pow(R, j);
  return -2.0 * azimuthal_l * (N_B * std::pow(R, N_B) + T_LZ * sum);
}

}  // namespace ringlat
