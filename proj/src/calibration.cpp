#include "ringlat/calibration.hpp"

#include <cmath>

#include "ringlat/errors.hpp"

namespace ringlat {

CalibrationResult calibrate_IV(double t_B, double peak_amplitude_A, double chirp_B,
                               int azimuthal_l, double hbar) {
  if (!(t_B > 0.0)) throw ValidationError("t_B must be > 0");
  if (!(peak_amplitude_A > 0.0)) throw ValidationError("peak amplitude must be > 0");
  if (!(chirp_B > 0.0)) throw ValidationError("chirp constant must be > 0");
  if (azimuthal_l < 1) throw ValidationError("azimuthal_l must be >= 1");

  CalibrationResult res;
  const double l = azimuthal_l;
  res.I_est = 4.0 * l * l * hbar / (chirp_B * t_B);
  res.V_est = 2.0 * l * hbar * hbar * chirp_B / peak_amplitude_A;
  res.t_B = t_B;
  res.peak_amplitude_A = peak_amplitude_A;
  res.chirp_B = chirp_B;
  res.azimuthal_l = azimuthal_l;
  const double Er_est = hbar * hbar * l * l / (2.0 * res.I_est);
  res.shallow_caveat = res.V_est > 0.5 * Er_est;
  return res;
}

double predicted_inverse_bloch(const RingLatticeParams& p, double chirp_B, double omega_dot) {
  return p.hbar / (8.0 * p.recoil_energy_Er) *
         (chirp_B - 2.0 * p.azimuthal_l * omega_dot);
}

SensingResult infer_angular_acceleration(double B1, double t_B1, double B2, double t_B2,
                                         int azimuthal_l) {
  if (azimuthal_l < 1) throw ValidationError("azimuthal_l must be >= 1");
  if (B1 == B2) throw ValidationError("the two chirp constants must differ");
  if (t_B1 == t_B2)
    throw ValidationError("degenerate input: equal Bloch periods cannot separate the offset");

  SensingResult res;
  res.B1 = B1;
  res.t_B1 = t_B1;
  res.B2 = B2;
  res.t_B2 = t_B2;
  res.azimuthal_l = azimuthal_l;
  res.omega_dot_est = (B2 * t_B2 - B1 * t_B1) / (2.0 * azimuthal_l * (t_B2 - t_B1));
  return res;
}

InverseBlochFit fit_inverse_bloch(const std::vector<std::pair<double, double>>& B_tB_points,
                                  int azimuthal_l, std::optional<double> fixed_slope) {
  if (azimuthal_l < 1) throw ValidationError("azimuthal_l must be >= 1");
  if (B_tB_points.size() < 2) throw ValidationError("fit needs at least two chirp runs");

  const std::size_t n = B_tB_points.size();
  InverseBlochFit fit;
  if (fixed_slope) {
    fit.slope = *fixed_slope;
    double acc = 0.0;
    for (const auto& [B, tB] : B_tB_points) {
      if (!(tB > 0.0)) throw ValidationError("Bloch periods must be > 0");
      acc += 1.0 / tB - fit.slope * B;
    }
    fit.intercept = acc / static_cast<double>(n);
  } else {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [B, tB] : B_tB_points) {
      if (!(tB > 0.0)) throw ValidationError("Bloch periods must be > 0");
      const double y = 1.0 / tB;
      sx += B;
      sy += y;
      sxx += B * B;
      sxy += B * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw ValidationError("chirp constants are all equal; slope is undefined");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  // 1/t_B = slope (B - 2 l Omega-dot)  =>  Omega-dot = -intercept/(2 l slope)
  if (fit.slope == 0.0) throw ValidationError("fitted slope vanished; cannot invert for Omega-dot");
  fit.omega_dot_est = -fit.intercept / (2.0 * azimuthal_l * fit.slope);
  return fit;
}

}  // namespace ringlat
