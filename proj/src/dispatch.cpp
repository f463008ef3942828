#include "ringlat/dispatch.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

#include "ringlat/analysis.hpp"
#include "ringlat/band_evolve.hpp"
#include "ringlat/bands.hpp"
#include "ringlat/calibration.hpp"
#include "ringlat/errors.hpp"
#include "ringlat/io.hpp"
#include "ringlat/propagator.hpp"
#include "ringlat/protocols.hpp"
#include "ringlat/two_level.hpp"
#include "ringlat/version.hpp"

namespace ringlat::cli {

namespace {

using nlohmann::json;

class StageTimer {
 public:
  explicit StageTimer(RunManifest& manifest, std::string name)
      : manifest_(manifest), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto stop = std::chrono::steady_clock::now();
    manifest_.timings_s[name_] = std::chrono::duration<double>(stop - start_).count();
  }

 private:
  RunManifest& manifest_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

std::string out_path(const DispatchOptions& opts, const std::string& name) {
  return (std::filesystem::path(opts.out_dir) / name).string();
}

void emit(RunManifest& manifest, const DispatchOptions& opts, const std::string& name,
          const std::string& content) {
  const std::string path = out_path(opts, name);
  write_text_atomic(path, content);
  manifest.outputs.push_back(path);
}

json signature_to_json(const BlochSignature& sig) {
  json j;
  j["t_B"] = sig.t_B;
  j["peak_amplitude_A"] = sig.peak_amplitude_A;
  if (std::isfinite(sig.fwhm))
    j["fwhm"] = sig.fwhm;
  else
    j["fwhm"] = nullptr;
  j["peak_times"] = sig.peak_times;
  return j;
}

ExperimentConfig experiment_config(const ResolvedConfig& rc) {
  ExperimentConfig ec;
  ec.params = rc.params;
  ec.load_time_tL = rc.t_L;
  ec.ramp_rate_s = rc.ramp_rate_s;
  ec.chirp_B = rc.chirp_B;
  ec.external_acceleration = rc.omega_dot;
  ec.rotation_time_tf = rc.t_f;
  ec.grid_N = rc.numerics.grid_N;
  ec.dt = rc.numerics.dt;
  ec.sample_every = rc.numerics.sample_every;
  return ec;
}

ObservableTrace simulated_or_loaded_trace(const ResolvedConfig& rc, RunManifest& manifest,
                                          const DispatchOptions& opts,
                                          const std::string& trace_name) {
  if (!rc.analysis.input_trace.empty()) return read_trace_csv(rc.analysis.input_trace);
  ObservableTrace trace = run_experiment(experiment_config(rc));
  trace.metadata["config"] = rc.fingerprint;
  emit(manifest, opts, trace_name, trace_to_csv(trace));
  return trace;
}

// --- subcommands -----------------------------------------------------------

void cmd_bands(const ResolvedConfig& rc, RunManifest& manifest, const DispatchOptions& opts) {
  StageTimer timer(manifest, "bands");
  std::vector<BandTableRow> rows;
  const int points = rc.analysis.q_points;
  for (int i = 0; i < points; ++i) {
    const double q =
        rc.analysis.q_min + (rc.analysis.q_max - rc.analysis.q_min) * i / (points - 1.0);
    const BandSolution sol =
        solve_bands(rc.params, q, rc.analysis.n_max, rc.numerics.k_max);
    for (int n = 0; n <= rc.analysis.n_max; ++n)
      rows.push_back({q, n, sol.energies[n] / rc.params.recoil_energy_Er});
  }
  emit(manifest, opts, "bands.csv", band_table_to_csv(rows));
}

void cmd_gs(const ResolvedConfig& rc, RunManifest& manifest, const DispatchOptions& opts) {
  StageTimer timer(manifest, "gs");
  const int N = rc.numerics.grid_N > 0 ? rc.numerics.grid_N : default_grid_for(rc.params);
  const WaveFunction psi =
      bloch_state_on_ring(rc.params, {0, 0, 0.0}, N, rc.numerics.k_max);
  const Eigen::VectorXd phi = angular_grid(N);
  std::ostringstream out;
  out << "phi,u_abs2\n";
  for (int j = 0; j < N; ++j) {
    const double u2 = 2.0 * M_PI * std::norm(psi.amplitudes[j]);
    out << format_float(phi[j]) << "," << format_float(u2) << "\n";
  }
  emit(manifest, opts, "gs.csv", out.str());
}

void cmd_evolve(const ResolvedConfig& rc, RunManifest& manifest, const DispatchOptions& opts) {
  StageTimer timer(manifest, "evolve");
  const RingLatticeParams& p = rc.params;
  const int N = rc.numerics.grid_N > 0 ? rc.numerics.grid_N : default_grid_for(p);

  double B = 0.0;
  if (rc.chirp_B)
    B = *rc.chirp_B;
  else if (rc.ramp_rate_s)
    B = 2.0 * p.azimuthal_l * p.hbar * (*rc.ramp_rate_s) / p.inertia_I;

  DriveSchedule schedule;
  schedule.depth = PiecewiseLinearProgram::constant(p.depth_V);
  schedule.chirp = PiecewiseLinearProgram::linear(0.0, -B);
  schedule.rotation = PiecewiseLinearProgram::linear(0.0, rc.omega_dot.value_or(0.0));

  const WaveFunction initial = bloch_state_on_ring(p, {0, 0, 0.0}, N, rc.numerics.k_max);
  EvolveOptions eo;
  eo.dt = rc.numerics.dt;
  eo.sample_every = rc.numerics.sample_every;
  const Trajectory traj = evolve(initial, p, schedule, 0.0, rc.t_f, eo);

  ObservableTrace trace;
  trace.times = traj.times;
  trace.values = traj.Lz;
  trace.metadata["config"] = rc.fingerprint;
  trace.metadata["B"] = format_float(B);
  emit(manifest, opts, "trace.csv", trace_to_csv(trace));
}

void cmd_experiment(const ResolvedConfig& rc, RunManifest& manifest,
                    const DispatchOptions& opts) {
  StageTimer timer(manifest, "experiment");
  ObservableTrace trace = run_experiment(experiment_config(rc));
  trace.metadata["config"] = rc.fingerprint;
  emit(manifest, opts, "trace.csv", trace_to_csv(trace));

  DetectionOptions det;
  det.threshold_factor = rc.analysis.peak_threshold;
  const BlochSignature sig = detect_bloch_signature(trace_derivative(trace), det);
  emit(manifest, opts, "signature.json", signature_to_json(sig).dump(2) + "\n");
}

void cmd_deriv(const ResolvedConfig& rc, RunManifest& manifest, const DispatchOptions& opts) {
  StageTimer timer(manifest, "deriv");
  const ObservableTrace trace = simulated_or_loaded_trace(rc, manifest, opts, "trace.csv");
  const ObservableTrace deriv = trace_derivative(trace);
  emit(manifest, opts, "deriv.csv", trace_to_csv(deriv));
  DetectionOptions det;
  det.threshold_factor = rc.analysis.peak_threshold;
  const BlochSignature sig = detect_bloch_signature(deriv, det);
  emit(manifest, opts, "signature.json", signature_to_json(sig).dump(2) + "\n");
}

void cmd_load_check(const ResolvedConfig& rc, RunManifest& manifest,
                    const DispatchOptions& opts) {
  StageTimer timer(manifest, "load-check");
  std::vector<double> grid = rc.analysis.t_L_values;
  if (grid.empty())
    for (int i = 1; i <= 10; ++i) grid.push_back(0.3 * i);

  std::ostringstream out;
  out << "t_L,fidelity\n";
  for (double tL : grid) {
    const double F = loading_fidelity(rc.params, tL, rc.numerics.grid_N, rc.numerics.dt);
    out << format_float(tL) << "," << format_float(F) << "\n";
  }
  emit(manifest, opts, "loading.csv", out.str());
}

void cmd_lz(const ResolvedConfig& rc, RunManifest& manifest, const DispatchOptions& opts) {
  StageTimer timer(manifest, "lz");
  double s = 0.0;
  if (rc.ramp_rate_s)
    s = *rc.ramp_rate_s;
  else if (rc.chirp_B)
    s = rc.params.inertia_I * (*rc.chirp_B) / (2.0 * rc.params.azimuthal_l * rc.params.hbar);
  else
    throw ValidationError("lz: schedule must give s or B");

  const LZReport rep = lz_analytics(rc.params, std::abs(s));
  const double halfwidth =
      10.0 * rc.params.depth_V * rc.params.azimuthal_l / (8.0 * rc.params.recoil_energy_Er);
  const TwoLevelResult tl = two_level_evolve(rc.params, std::abs(s),
                                             rc.params.azimuthal_l - halfwidth,
                                             rc.params.azimuthal_l + halfwidth);
  json j;
  j["gamma"] = rep.gamma;
  j["T_LZ"] = rep.T_LZ;
  j["phi_LZ"] = rep.phi_LZ;
  j["s_c"] = rep.s_c;
  j["adiabatic_margin"] = rep.adiabatic_margin;
  j["two_level_transmitted"] = tl.transmitted_fraction;
  emit(manifest, opts, "lz.json", j.dump(2) + "\n");
}

void cmd_calibrate(const ResolvedConfig& rc, RunManifest& manifest,
                   const DispatchOptions& opts) {
  StageTimer timer(manifest, "calibrate");
  if (!rc.chirp_B) throw ValidationError("calibrate: schedule.B (chirp constant) is required");
  const ObservableTrace trace = simulated_or_loaded_trace(rc, manifest, opts, "trace.csv");
  const ObservableTrace deriv = trace_derivative(trace);
  emit(manifest, opts, "deriv.csv", trace_to_csv(deriv));

  DetectionOptions det;
  det.threshold_factor = rc.analysis.peak_threshold;
  const BlochSignature sig = detect_bloch_signature(deriv, det);
  emit(manifest, opts, "signature.json", signature_to_json(sig).dump(2) + "\n");

  const CalibrationResult cal = calibrate_IV(sig.t_B, sig.peak_amplitude_A, *rc.chirp_B,
                                             rc.params.azimuthal_l, rc.params.hbar);
  json j;
  j["I_est"] = cal.I_est;
  j["V_est"] = cal.V_est;
  j["inputs"] = {{"t_B", cal.t_B},
                 {"A", cal.peak_amplitude_A},
                 {"B", cal.chirp_B},
                 {"l", cal.azimuthal_l}};
  j["shallow_caveat"] = cal.shallow_caveat;
  emit(manifest, opts, "calibration.json", j.dump(2) + "\n");
}

void cmd_sense(const ResolvedConfig& rc, const json& raw, RunManifest& manifest,
               const DispatchOptions& opts) {
  StageTimer timer(manifest, "sense");
  if (!rc.chirp_B || !rc.chirp_B2)
    throw ValidationError("sense: schedule.B and schedule.B2 are both required");

  const double Bs[2] = {*rc.chirp_B, *rc.chirp_B2};
  double tB[2] = {0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    json raw_i = raw;
    raw_i["schedule"]["B"] = Bs[i];
    raw_i["schedule"].erase("B2");
    const ResolvedConfig rci = parse_config_json(raw_i, false);
    ObservableTrace trace = run_experiment(experiment_config(rci));
    trace.metadata["config"] = rci.fingerprint;
    emit(manifest, opts, "trace_run" + std::to_string(i + 1) + ".csv", trace_to_csv(trace));
    DetectionOptions det;
    det.threshold_factor = rci.analysis.peak_threshold;
    const BlochSignature sig = detect_bloch_signature(trace_derivative(trace), det);
    emit(manifest, opts, "signature_run" + std::to_string(i + 1) + ".json",
         signature_to_json(sig).dump(2) + "\n");
    tB[i] = sig.t_B;
  }

  const SensingResult res =
      infer_angular_acceleration(Bs[0], tB[0], Bs[1], tB[1], rc.params.azimuthal_l);
  json j;
  j["omega_dot_est"] = res.omega_dot_est;
  j["inputs"] = {{"B1", res.B1}, {"t_B1", res.t_B1}, {"B2", res.B2},
                 {"t_B2", res.t_B2}, {"l", res.azimuthal_l}};
  emit(manifest, opts, "sensing.json", j.dump(2) + "\n");
}

// --- sweep -----------------------------------------------------------------

json with_override(const json& raw, const std::string& dotted_path, double value) {
  json out = raw;
  json* node = &out;
  std::string rest = dotted_path;
  while (true) {
    const auto dot = rest.find('.');
    if (dot == std::string::npos) break;
    const std::string head = rest.substr(0, dot);
    if (!node->contains(head)) (*node)[head] = json::object();
    node = &(*node)[head];
    rest = rest.substr(dot + 1);
  }
  (*node)[rest] = value;
  return out;
}

struct SweepPoint {
  bool ok = false;
  std::string error;
  double value = 0.0;
  double final_Lz = 0.0;
  double t_B = 0.0;  // NaN when not detectable
  double A = 0.0;
};

void cmd_sweep_experiment(const ResolvedConfig& rc, const json& raw, RunManifest& manifest,
                          const DispatchOptions& opts) {
  StageTimer timer(manifest, "sweep");
  const SweepSpec& spec = *rc.sweep;
  const std::size_t n = spec.values.size();
  std::vector<SweepPoint> points(n);

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      SweepPoint& pt = points[i];
      pt.value = spec.values[i];
      try {
        json raw_i = with_override(raw, spec.param, spec.values[i]);
        raw_i.erase("sweep");
        const ResolvedConfig rci = parse_config_json(raw_i, false);
        ObservableTrace trace = run_experiment(experiment_config(rci));
        char name[64];
        std::snprintf(name, sizeof(name), "trace_%03zu.csv", i);
        trace.metadata["config"] = rci.fingerprint;
        write_text_atomic(out_path(opts, name), trace_to_csv(trace));
        pt.final_Lz = trace.values.back();
        try {
          const BlochSignature sig = detect_bloch_signature(trace_derivative(trace));
          pt.t_B = sig.t_B;
          pt.A = sig.peak_amplitude_A;
        } catch (const DetectionError&) {
          pt.t_B = std::numeric_limits<double>::quiet_NaN();
          pt.A = std::numeric_limits<double>::quiet_NaN();
        }
        pt.ok = true;
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < n; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "trace_%03zu.csv", i);
    if (points[i].ok) manifest.outputs.push_back(out_path(opts, name));
  }

  std::ostringstream out;
  out << "index," << spec.param << ",status,final_Lz,t_B,A\n";
  for (std::size_t i = 0; i < n; ++i) {
    const SweepPoint& pt = points[i];
    out << i << "," << format_float(pt.value) << "," << (pt.ok ? "ok" : "failed") << ",";
    if (pt.ok) {
      out << format_float(pt.final_Lz) << ","
          << (std::isfinite(pt.t_B) ? format_float(pt.t_B) : "") << ","
          << (std::isfinite(pt.A) ? format_float(pt.A) : "");
    } else {
      out << ",,";
    }
    out << "\n";
  }
  emit(manifest, opts, "sweep.csv", out.str());

  for (std::size_t i = 0; i < n; ++i) {
    if (!points[i].ok) {
      manifest.failures.push_back("point " + std::to_string(i) + " (" + spec.param + " = " +
                                  format_float(points[i].value) + "): " + points[i].error);
    }
  }
  if (!manifest.failures.empty()) manifest.exit_code = 2;
}

// --- reproduce -------------------------------------------------------------

struct FigureCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

void cmd_reproduce(RunManifest& manifest, const DispatchOptions& opts) {
  std::vector<FigureCheck> checks;
  const RingLatticeParams p_fig2 = make_params_dimensionless(1.0, 2);

  {  // Band structure data (V = E_r, l = 2) and ground-state density.
    StageTimer timer(manifest, "fig2_fig3");
    std::vector<BandTableRow> rows;
    for (int i = 0; i < 161; ++i) {
      const double q = -2.0 + 4.0 * i / 160.0;
      const BandSolution sol = solve_bands(p_fig2, q, 3);
      for (int n = 0; n <= 3; ++n) rows.push_back({q, n, sol.energies[n]});
    }
    emit(manifest, opts, "fig2_bands.csv", band_table_to_csv(rows));

    const int N = 256;
    const WaveFunction psi = bloch_state_on_ring(p_fig2, {0, 0, 0.0}, N);
    const Eigen::VectorXd phi = angular_grid(N);
    std::ostringstream out;
    out << "phi,u_abs2\n";
    for (int j = 0; j < N; ++j)
      out << format_float(phi[j]) << ","
          << format_float(2.0 * M_PI * std::norm(psi.amplitudes[j])) << "\n";
    emit(manifest, opts, "fig3_groundstate.csv", out.str());
    checks.push_back({"fig2_fig3", true, "band table and ground-state density written"});
  }

  const auto rotation_run = [&](double V, double s, double t_f, int sample_every) {
    const RingLatticeParams p = make_params_dimensionless(V, 2);
    const double B = 2.0 * p.azimuthal_l * p.hbar * s / p.inertia_I;
    DriveSchedule schedule;
    schedule.depth = PiecewiseLinearProgram::constant(p.depth_V);
    schedule.chirp = PiecewiseLinearProgram::linear(0.0, -B);
    const WaveFunction initial = bloch_state_on_ring(p, {0, 0, 0.0}, 256);
    EvolveOptions eo;
    eo.dt = 5e-3;
    eo.sample_every = sample_every;
    const Trajectory traj = evolve(initial, p, schedule, 0.0, t_f, eo);
    ObservableTrace trace;
    trace.times = traj.times;
    trace.values = traj.Lz;
    trace.metadata["V"] = format_float(V);
    trace.metadata["s"] = format_float(s);
    trace.metadata["B"] = format_float(B);
    return trace;
  };

  {  // Deep-lattice oscillations: V = 3 E_r, s = 0.01 w_r, three periods.
    StageTimer timer(manifest, "fig5");
    const double tB = 400.0;
    const ObservableTrace trace = rotation_run(3.0, 0.01, 3.0 * tB, 10);
    emit(manifest, opts, "fig5_lz.csv", trace_to_csv(trace));
    double worst = 0.0;
    for (int nb = 1; nb <= 3; ++nb) {
      const std::size_t idx = static_cast<std::size_t>(std::llround(
          (nb * tB - trace.times.front()) / trace.sample_dt()));
      worst = std::max(worst, std::abs(trace.values[idx] + 4.0 * nb));
    }
    checks.push_back({"fig5", worst < 0.02 * 4.0,
                      "plateau deviation " + format_float(worst) + " hbar"});
  }

  ObservableTrace fig7_trace;
  {  // Shallow-lattice staircase: V = 0.5 E_r, s = 0.002 w_r.
    StageTimer timer(manifest, "fig7");
    const double tB = 2000.0;
    fig7_trace = rotation_run(0.5, 0.002, 2.25 * tB, 10);
    emit(manifest, opts, "fig7_lz.csv", trace_to_csv(fig7_trace));
    double worst = 0.0;
    for (int nb = 1; nb <= 2; ++nb) {
      const std::size_t idx = static_cast<std::size_t>(std::llround(
          (nb * tB - fig7_trace.times.front()) / fig7_trace.sample_dt()));
      worst = std::max(worst, std::abs(fig7_trace.values[idx] + 4.0 * nb));
    }
    checks.push_back({"fig7", worst < 0.05, "plateau deviation " + format_float(worst) + " hbar"});
  }

  {  // Derivative peaks of the shallow staircase.
    StageTimer timer(manifest, "fig8");
    const ObservableTrace deriv = trace_derivative(fig7_trace);
    emit(manifest, opts, "fig8_deriv.csv", trace_to_csv(deriv));
    const BlochSignature sig = detect_bloch_signature(deriv);
    emit(manifest, opts, "fig8_signature.json", signature_to_json(sig).dump(2) + "\n");
    const double A_expect = 2.0 * 2.0 * 0.004 / 0.5;
    const bool ok = std::abs(sig.t_B - 2000.0) < 0.01 * 2000.0 &&
                    std::abs(sig.peak_amplitude_A - A_expect) < 0.05 * A_expect;
    checks.push_back({"fig8", ok,
                      "t_B = " + format_float(sig.t_B) +
                          ", A = " + format_float(sig.peak_amplitude_A)});
  }

  {  // Loading populations and fidelity (V = 5 E_r).
    StageTimer timer(manifest, "figB1_figB2");
    const RingLatticeParams p = make_params_dimensionless(5.0, 2);
    const int N = 256;
    const double t_L = 1.0;
    DriveSchedule loading;
    loading.depth = PiecewiseLinearProgram({{-t_L, 0.0, p.depth_V / t_L}, {0.0, p.depth_V, 0.0}});
    WaveFunction psi;
    psi.amplitudes = Eigen::VectorXcd::Constant(N, 1.0 / std::sqrt(2.0 * M_PI));
    EvolveOptions eo;
    eo.dt = 5e-3;
    eo.sample_every = 2;
    eo.store_states = true;
    const Trajectory traj = evolve(psi, p, loading, -t_L, 0.0, eo);

    std::vector<WaveFunction> targets;
    for (int n : {0, 2, 4}) targets.push_back(bloch_state_on_ring(p, {n, 0, 0.0}, N));
    std::ostringstream out;
    out << "t,pop_n0,pop_n2,pop_n4\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      out << format_float(traj.times[i]);
      for (const auto& target : targets)
        out << "," << format_float(std::norm(inner_product(target, traj.states[i])));
      out << "\n";
    }
    emit(manifest, opts, "figB1_populations.csv", out.str());

    std::ostringstream fid;
    fid << "t_L,fidelity\n";
    bool monotone = true;
    double prev = 0.0, f12 = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double tL = 0.3 * i;
      const double F = loading_fidelity(p, tL, N, 5e-3);
      if (i > 1 && F < prev - 1e-12) monotone = false;
      if (i == 4) f12 = F;
      prev = F;
      fid << format_float(tL) << "," << format_float(F) << "\n";
    }
    emit(manifest, opts, "figB2_fidelity.csv", fid.str());
    checks.push_back({"figB1_figB2", monotone && f12 >= 0.99,
                      "F(1.2/w_r) = " + format_float(f12) +
                          (monotone ? ", monotone" : ", NOT monotone")});
  }

  {  // Critical-ramp staircase: s = s_c.
    StageTimer timer(manifest, "figC1");
    const RingLatticeParams p = make_params_dimensionless(0.5, 2);
    const LZReport rep = lz_analytics(p, 0.002);
    const double s_c = rep.s_c;
    const double tB = 2.0 * p.azimuthal_l / s_c;
    const ObservableTrace trace = rotation_run(0.5, s_c, 4.3 * tB, 10);
    emit(manifest, opts, "figC1_lz.csv", trace_to_csv(trace));

    json stairs = json::array();
    double worst_rel = 0.0;
    const double T = std::exp(-1.0);
    for (int nb = 1; nb <= 4; ++nb) {
      const std::size_t idx = static_cast<std::size_t>(std::llround(
          (nb * tB - trace.times.front()) / trace.sample_dt()));
      const double predicted = staircase_prediction(T, nb, 2);
      const double simulated = trace.values[idx];
      worst_rel = std::max(worst_rel, std::abs(simulated - predicted) / std::abs(predicted));
      stairs.push_back({{"N_B", nb}, {"predicted", predicted}, {"simulated", simulated}});
    }
    emit(manifest, opts, "figC1_staircase.json", stairs.dump(2) + "\n");
    checks.push_back({"figC1", worst_rel < 0.02,
                      "worst staircase deviation " + format_float(worst_rel * 100.0) + " %"});
  }

  {  // Shallow-lattice closed forms against the eigensolver (V = E_r).
    StageTimer timer(manifest, "figD1");
    std::ostringstream out;
    out << "q,E0_numeric,E1_numeric,E0_closed,E1_closed\n";
    double worst = 0.0;
    for (int i = 1; i < 200; ++i) {
      const double q = 4.0 * i / 200.0;
      const BandSolution sol = solve_bands(p_fig2, q, 1);
      const ShallowBands sb = shallow_bands(p_fig2, q);
      worst = std::max({worst, std::abs(sol.energies[0] - sb.E0),
                        std::abs(sol.energies[1] - sb.E1)});
      out << format_float(q) << "," << format_float(sol.energies[0]) << ","
          << format_float(sol.energies[1]) << "," << format_float(sb.E0) << ","
          << format_float(sb.E1) << "\n";
    }
    emit(manifest, opts, "figD1_bands.csv", out.str());
    checks.push_back({"figD1", worst <= 0.05,
                      "max closed-form deviation " + format_float(worst) + " E_r"});
  }

  std::ostringstream report;
  bool all_pass = true;
  for (const auto& c : checks) {
    report << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    all_pass = all_pass && c.pass;
  }
  emit(manifest, opts, "report.txt", report.str());
  if (!all_pass) manifest.exit_code = 2;
}

}  // namespace

RunManifest dispatch(const std::string& subcommand, const json& raw_config,
                     const DispatchOptions& opts) {
  RunManifest manifest;
  manifest.version = kVersion;

  std::filesystem::create_directories(opts.out_dir);

  if (subcommand == "reproduce") {
    manifest.run_id = content_hash("reproduce-" + std::string(kVersion));
    manifest.config_echo = json::object();
    cmd_reproduce(manifest, opts);
  } else {
    const ResolvedConfig rc = parse_config_json(raw_config, opts.strict);
    for (const auto& w : rc.warnings) manifest.failures.push_back("warning: " + w);
    manifest.run_id = rc.fingerprint;
    manifest.config_echo = rc.echo;

    if (rc.sweep) {
      if (subcommand != "experiment")
        throw ValidationError("sweep: only the experiment subcommand supports sweeps");
      cmd_sweep_experiment(rc, raw_config, manifest, opts);
    } else if (subcommand == "bands") {
      cmd_bands(rc, manifest, opts);
    } else if (subcommand == "gs") {
      cmd_gs(rc, manifest, opts);
    } else if (subcommand == "evolve") {
      cmd_evolve(rc, manifest, opts);
    } else if (subcommand == "experiment") {
      cmd_experiment(rc, manifest, opts);
    } else if (subcommand == "deriv") {
      cmd_deriv(rc, manifest, opts);
    } else if (subcommand == "load-check") {
      cmd_load_check(rc, manifest, opts);
    } else if (subcommand == "lz") {
      cmd_lz(rc, manifest, opts);
    } else if (subcommand == "calibrate") {
      cmd_calibrate(rc, manifest, opts);
    } else if (subcommand == "sense") {
      cmd_sense(rc, raw_config, manifest, opts);
    } else {
      throw ValidationError("unknown subcommand: " + subcommand);
    }
  }

  json mj;
  mj["run_id"] = manifest.run_id;
  mj["version"] = manifest.version;
  mj["config"] = manifest.config_echo;
  mj["outputs"] = manifest.outputs;
  mj["timings_s"] = manifest.timings_s;
  if (!manifest.failures.empty()) mj["failures"] = manifest.failures;
  const std::string manifest_path = out_path(opts, "manifest.json");
  write_text_atomic(manifest_path, mj.dump(2) + "\n");
  manifest.outputs.push_back(manifest_path);
  return manifest;
}

}  // namespace ringlat::cli
