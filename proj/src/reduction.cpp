#include "ringlat/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "ringlat/quadrature.hpp"

namespace ringlat {

namespace {

constexpr double kSigmaCut = 12.0;  // Gaussian tails below 1e-31 beyond this

void validate(const Trap3DParams& t) {
  if (t.azimuthal_l < 1) throw ValidationError("azimuthal_l must be >= 1");
  if (!(t.mass_m > 0.0)) throw ValidationError("mass_m must be > 0");
  if (!(t.ring_radius_r0 > 0.0)) throw ValidationError("ring_radius_r0 must be > 0");
  if (!(t.omega_perp > 0.0)) throw ValidationError("omega_perp must be > 0");
  if (!(t.omega_z > 0.0)) throw ValidationError("omega_z must be > 0");
  if (!(t.beam_waist_w0 > 0.0)) throw ValidationError("beam_waist_w0 must be > 0");
  if (!(t.rayleigh_length_zR > 0.0)) throw ValidationError("rayleigh_length_zR must be > 0");
  if (!(t.lattice_scale_U > 0.0)) throw ValidationError("lattice_scale_U must be > 0");
  if (!(t.hbar > 0.0)) throw ValidationError("hbar must be > 0");
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

bool Trap3DParams::matches_lattice_ring() const {
  const double target = std::sqrt(0.5 * azimuthal_l) * beam_waist_w0;
  return std::abs(ring_radius_r0 - target) <= matching_tolerance * target;
}

double lg_profile(int azimuthal_l, double xi) {
  if (azimuthal_l < 1) throw ValidationError("azimuthal_l must be >= 1");
  if (xi < 0.0) throw ValidationError("xi must be >= 0");
  if (xi == 0.0) return 0.0;
  // Evaluate in log space; xi^(2l) e^{-xi^2} under/overflows early otherwise.
  const double lg = 2.0 * azimuthal_l * std::log(xi) - xi * xi - log_factorial(azimuthal_l);
  return std::exp(lg);
}

ReducedParams reduce_3d(const Trap3DParams& trap) {
  validate(trap);
  ReducedParams out;

  const double sigma_r = std::sqrt(trap.hbar / (trap.mass_m * trap.omega_perp));
  const double sigma_z = std::sqrt(trap.hbar / (trap.mass_m * trap.omega_z));

  if (sigma_r / trap.ring_radius_r0 > 0.1)
    out.warnings.push_back("radial width exceeds 0.1 r0; 1D reduction is inaccurate");
  if (sigma_z / trap.rayleigh_length_zR > 0.1)
    out.warnings.push_back("axial width exceeds 0.1 zR; 1D reduction is inaccurate");
  if (!trap.matches_lattice_ring())
    out.warnings.push_back("r0 does not match the lattice maximum sqrt(l/2) w0");

  // Ground states of the harmonic terms: R0 a Gaussian about r0 truncated
  // to r > 0 and renormalized, Z0 the exact axial Gaussian.
  const double r_lo = std::max(trap.ring_radius_r0 - kSigmaCut * sigma_r, 1e-3 * sigma_r);
  const double r_hi = trap.ring_radius_r0 + kSigmaCut * sigma_r;
  const double z_hi = kSigmaCut * sigma_z;

  const auto radial_density_unnorm = [&](double r) {
    const double u = (r - trap.ring_radius_r0) / sigma_r;
    return std::exp(-u * u);
  };
  const double radial_norm =
      integrate_adaptive(radial_density_unnorm, r_lo, r_hi, 1e-12, 0.0).value;

  const auto radial_density = [&](double r) { return radial_density_unnorm(r) / radial_norm; };
  const auto axial_density = [&](double z) {
    const double u = z / sigma_z;
    return std::exp(-u * u) / (sigma_z * std::sqrt(M_PI));
  };

  const double inv_mr2 =
      integrate_adaptive([&](double r) { return radial_density(r) / (trap.mass_m * r * r); },
                         r_lo, r_hi, 1e-10, 0.0)
          .value;
  out.inertia_I = 1.0 / inv_mr2;

  const auto lattice_amplitude_at = [&](double r, double z) {
    const double w = trap.beam_waist_w0 *
                     std::sqrt(1.0 + (z / trap.rayleigh_length_zR) * (z / trap.rayleigh_length_zR));
    return lg_profile(trap.azimuthal_l, std::sqrt(2.0) * r / w);
  };
  const auto outer = [&](double r) {
    const double inner =
        integrate_adaptive(
            [&](double z) { return axial_density(z) * lattice_amplitude_at(r, z); }, -z_hi, z_hi,
            1e-11, 0.0)
            .value;
    return radial_density(r) * inner;
  };
  out.depth_V =
      trap.lattice_scale_U * integrate_adaptive(outer, r_lo, r_hi, 1e-10, 0.0).value;

  const double centrifugal_like =
      integrate_adaptive([&](double r) { return radial_density(r) / (4.0 * r * r); }, r_lo, r_hi,
                         1e-10, 0.0)
          .value;
  out.energy_offset_eps0 =
      centrifugal_like + 0.5 * trap.hbar * (trap.omega_z + trap.omega_perp) - out.depth_V;

  return out;
}

EstimatedParams estimate_params(const Trap3DParams& trap) {
  validate(trap);
  EstimatedParams e;
  e.inertia_I = trap.mass_m * trap.ring_radius_r0 * trap.ring_radius_r0;
  e.depth_V =
      trap.lattice_scale_U * lg_profile(trap.azimuthal_l, std::sqrt(double(trap.azimuthal_l)));
  return e;
}

}  // namespace ringlat
