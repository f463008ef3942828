#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ringlat/params.hpp"

namespace ringlat {

struct CalibrationResult {
  double I_est = 0.0;
  double V_est = 0.0;
  double t_B = 0.0;
  double peak_amplitude_A = 0.0;
  double chirp_B = 0.0;
  int azimuthal_l = 0;
  // Set when the inferred depth leaves the shallow-lattice regime where the
  // peak-height formula holds.
  bool shallow_caveat = false;
};

// Inverts the chirp-run observables: I = 4 l^2 hbar / (B t_B),
// V = 2 l hbar^2 B / A.
CalibrationResult calibrate_IV(double t_B, double peak_amplitude_A, double chirp_B,
                               int azimuthal_l, double hbar = 1.0);

// 1/t_B = (hbar / (8 E_r)) (B - 2 l Omega-dot); non-positive values flag a
// reversed or absent oscillation.
double predicted_inverse_bloch(const RingLatticeParams& p, double chirp_B, double omega_dot);

struct SensingResult {
  double omega_dot_est = 0.0;
  double B1 = 0.0, t_B1 = 0.0;
  double B2 = 0.0, t_B2 = 0.0;
  int azimuthal_l = 0;
};

// Two-run estimator: Omega-dot = (B2 t2 - B1 t1) / (2 l (t2 - t1)).
SensingResult infer_angular_acceleration(double B1, double t_B1, double B2, double t_B2,
                                         int azimuthal_l);

struct InverseBlochFit {
  double slope = 0.0;      // d(1/t_B)/dB
  double intercept = 0.0;  // 1/t_B at B = 0
  double omega_dot_est = 0.0;
};

// Least-squares fit of 1/t_B = slope * B + intercept over >= 2 chirp runs;
// fixing the slope to hbar/(8 E_r) leaves only the offset free.
InverseBlochFit fit_inverse_bloch(const std::vector<std::pair<double, double>>& B_tB_points,
                                  int azimuthal_l, std::optional<double> fixed_slope = {});

}  // namespace ringlat
