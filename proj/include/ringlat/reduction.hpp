#pragma once

#include <string>
#include <vector>

#include "ringlat/params.hpp"

namespace ringlat {

// 3D trap: toroidal confinement (radius r0, frequencies omega_perp/omega_z)
// plus the ring lattice from two counter-winding beams of waist w0,
// Rayleigh length zR and single-beam depth scale U.
struct Trap3DParams {
  double mass_m = 0.0;
  double ring_radius_r0 = 0.0;
  double omega_perp = 0.0;
  double omega_z = 0.0;
  double beam_waist_w0 = 0.0;
  double rayleigh_length_zR = 0.0;
  double lattice_scale_U = 0.0;
  int azimuthal_l = 1;
  double hbar = 1.0;
  // r0 should match the lattice intensity maximum at sqrt(l/2) w0.
  double matching_tolerance = 1e-6;

  bool matches_lattice_ring() const;
};

// Beam intensity profile f_l(xi) = exp(-xi^2) xi^(2l) / l!, maximal at
// xi = sqrt(l).
double lg_profile(int azimuthal_l, double xi);

struct ReducedParams {
  double inertia_I = 0.0;
  double depth_V = 0.0;
  double energy_offset_eps0 = 0.0;
  std::vector<std::string> warnings;
};

// Transverse ground-state averages of the 3D potential: I from the inverse
// of <1/(m r^2)>, V from the lattice profile averaged over the radial and
// axial densities with the z-dependent waist kept in the integrand.
ReducedParams reduce_3d(const Trap3DParams& trap);

struct EstimatedParams {
  double inertia_I = 0.0;
  double depth_V = 0.0;
};

// Strong-confinement limits: I = m r0^2, V = U l^l e^{-l} / l!.
EstimatedParams estimate_params(const Trap3DParams& trap);

}  // namespace ringlat
