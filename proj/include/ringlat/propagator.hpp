#pragma once

#include <vector>

#include "ringlat/params.hpp"
#include "ringlat/schedule.hpp"
#include "ringlat/wavefunction.hpp"

namespace ringlat {

enum class Frame { Corotating, Lab };

enum class GaugeDirection { ToCorotating, ToLab };

struct Trajectory {
  std::vector<double> times;
  std::vector<double> Lz;     // hbar units
  std::vector<double> norms;  // should stay at 1
  std::vector<WaveFunction> states;  // filled only when requested
  Frame frame = Frame::Corotating;

  double final_Lz() const { return Lz.back(); }
  const WaveFunction& final_state() const { return states.back(); }
};

struct EvolveOptions {
  double dt = 5e-3;        // units of 1/w_r; guarded at 0.01/w_r
  int sample_every = 10;   // outer steps between recorded samples
  bool store_states = false;
  Frame frame = Frame::Corotating;
  // Subdivide a step when V or Omega_eff changes by more than this fraction
  // across it (midpoint sampling stays second order either way; this keeps
  // the prefactor small on fast ramps).
  double max_coefficient_change = 0.01;
};

// Strang-split propagation of the ring-lattice Schroedinger equation:
// half kinetic step in the angular-momentum basis (including the rotation
// term), full potential step in position, half kinetic step, all evaluated
// at the step midpoint. The co-rotating frame uses Omega_eff(t) and the
// potential cos^2(l phi); the lab frame uses Omega(t) and
// cos^2(l phi - a(t)). Negative time direction (t1 < t0) runs the exact
// inverse steps.
Trajectory evolve(const WaveFunction& initial, const RingLatticeParams& p,
                  const DriveSchedule& schedule, double t0, double t1,
                  const EvolveOptions& opts = {});

// Frame change by the angular shift a/l, applied as exact per-mode phases
// e^{+/- i m a / l}; ToCorotating maps Phi -> Theta.
WaveFunction gauge_map(const WaveFunction& state, double a, int azimuthal_l,
                       GaugeDirection direction);

}  // namespace ringlat
