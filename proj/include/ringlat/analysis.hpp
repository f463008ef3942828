#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringlat/bands.hpp"
#include "ringlat/params.hpp"
#include "ringlat/schedule.hpp"
#include "ringlat/wavefunction.hpp"

namespace ringlat {

// Uniformly sampled observable vs time; the exchange format between
// simulation, analysis and calibration.
struct ObservableTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::string value_name = "Lz_hbar";
  std::map<std::string, std::string> metadata;

  double sample_dt() const;
  std::size_t size() const { return times.size(); }
};

struct BlochSignature {
  double t_B = 0.0;              // mean inter-peak spacing
  double peak_amplitude_A = 0.0; // mean |refined peak depth|, hbar w_r units
  double fwhm = 0.0;             // mean full width at half maximum (NaN if unresolved)
  std::vector<double> peak_times;
};

// <L_z> in hbar units: sum_m m |c_m|^2 in the angular-momentum basis.
double mean_angular_momentum(const WaveFunction& state);

enum class AdiabaticMode { NumericBand, ShallowClosedForm };

// Adiabatic ground-band value of <L_z>(eta): -hbar eta + (I/hbar) dE0/dq,
// or the shallow-lattice closed form.
double adiabatic_prediction(const RingLatticeParams& p, double eta,
                            AdiabaticMode mode = AdiabaticMode::NumericBand,
                            int k_max = kDefaultKMax);

// 5-point finite-difference derivative; one-sided stencils at the ends.
ObservableTrace trace_derivative(const ObservableTrace& trace);

struct DetectionOptions {
  double threshold_factor = 5.0;  // peaks must exceed this multiple of the
                                  // median absolute level
};

// Locates the negative spikes of d<L_z>/dt, refines them with a parabolic
// fit, and reports period, mean depth and FWHM.
BlochSignature detect_bloch_signature(const ObservableTrace& derivative,
                                      const DetectionOptions& opts = {});

struct AdiabaticPhases {
  double dynamical = 0.0;
  double geometric = 0.0;
  // Parallel-transported ground-band eigenvector at the end of the path;
  // fixes the sign convention for phase comparisons.
  Eigen::VectorXd transported_u_end;
};

// Dynamical phase -(1/hbar) Int E^Theta_00(t) dt by adaptive quadrature
// over the numeric band, and the geometric phase accumulated from
// discretized eigenvector overlaps along eta(t).
AdiabaticPhases phases(const RingLatticeParams& p, const DriveSchedule& schedule, double t0,
                       double t1, int n_path_steps = 2000, int k_max = kDefaultKMax);

// Discrete geometric phase around one full Brillouin loop eta0 -> eta0 + 2l,
// closed by the k-index relabelling u_{q+2l} = e^{-2 i l phi} u_q.
double geometric_phase_loop(const RingLatticeParams& p, double eta0, int n_path_steps = 2000,
                            int k_max = kDefaultKMax);

}  // namespace ringlat
