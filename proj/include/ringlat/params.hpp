#pragma once

#include "ringlat/errors.hpp"

namespace ringlat {

enum class UnitMode { Dimensionless, Physical };

// Unit bookkeeping. All simulation code runs with hbar = 1, energies in E_r
// and times in 1/w_r; inputs in physical units are converted on entry via
// to_dimensionless(). energy_scale and time_scale record what one internal
// unit is worth in the original units.
struct UnitSystem {
  UnitMode mode = UnitMode::Dimensionless;
  double hbar = 1.0;
  double energy_scale = 1.0;
  double time_scale = 1.0;

  static UnitSystem dimensionless() { return {}; }
  static UnitSystem physical(double hbar_value) {
    UnitSystem u;
    u.mode = UnitMode::Physical;
    u.hbar = hbar_value;
    return u;
  }
};

// Effective 1D model of atoms on a ring of 2l lattice sites: kinetic term
// L_z^2/(2 I) plus potential V cos^2(l phi).
struct RingLatticeParams {
  double inertia_I = 0.0;
  double depth_V = 0.0;
  int azimuthal_l = 1;
  double hbar = 1.0;
  double recoil_energy_Er = 0.0;    // hbar^2 l^2 / (2 I)
  double recoil_frequency_wr = 0.0; // E_r / hbar
  UnitSystem units;
};

// Builds params and derives E_r = hbar^2 l^2/(2I), w_r = E_r/hbar exactly.
RingLatticeParams make_params(double inertia_I, double depth_V, int azimuthal_l,
                              const UnitSystem& units = UnitSystem::dimensionless());

// Recoil-unit constructor: I = l^2/2 so that E_r = w_r = 1 and depth is
// given directly in units of E_r.
RingLatticeParams make_params_dimensionless(double depth_over_Er, int azimuthal_l);

// Converts to recoil units (hbar = 1, E_r = 1). The returned UnitSystem
// records the original E_r and 1/w_r so results can be scaled back.
RingLatticeParams to_dimensionless(const RingLatticeParams& p);

}  // namespace ringlat
