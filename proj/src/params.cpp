#include "ringlat/params.hpp"

namespace ringlat {

RingLatticeParams make_params(double inertia_I, double depth_V, int azimuthal_l,
                              const UnitSystem& units) {
  if (azimuthal_l < 1) throw ValidationError("azimuthal_l must be >= 1");
  if (!(inertia_I > 0.0)) throw ValidationError("inertia_I must be > 0");
  if (!(depth_V >= 0.0)) throw ValidationError("depth_V must be >= 0");
  if (!(units.hbar > 0.0)) throw ValidationError("hbar must be > 0");

  RingLatticeParams p;
  p.inertia_I = inertia_I;
  p.depth_V = depth_V;
  p.azimuthal_l = azimuthal_l;
  p.hbar = units.hbar;
  const double l = static_cast<double>(azimuthal_l);
  p.recoil_energy_Er = units.hbar * units.hbar * l * l / (2.0 * inertia_I);
  p.recoil_frequency_wr = p.recoil_energy_Er / units.hbar;
  p.units = units;
  return p;
}

RingLatticeParams make_params_dimensionless(double depth_over_Er, int azimuthal_l) {
  const double l = static_cast<double>(azimuthal_l);
  return make_params(0.5 * l * l, depth_over_Er, azimuthal_l, UnitSystem::dimensionless());
}

RingLatticeParams to_dimensionless(const RingLatticeParams& p) {
  RingLatticeParams q = make_params_dimensionless(p.depth_V / p.recoil_energy_Er, p.azimuthal_l);
  q.units.mode = p.units.mode;
  q.units.hbar = 1.0;
  q.units.energy_scale = p.recoil_energy_Er;
  q.units.time_scale = 1.0 / p.recoil_frequency_wr;
  return q;
}

}  // namespace ringlat
