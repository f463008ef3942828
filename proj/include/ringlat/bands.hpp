#pragma once

#include <Eigen/Dense>

#include "ringlat/params.hpp"
#include "ringlat/wavefunction.hpp"

namespace ringlat {

// One quasi angular momentum q: band energies E_n(q) ascending and the
// plane-wave coefficients of u_{n,q}(phi) = sum_k c_k exp(-i 2 l k phi),
// k = -k_max .. k_max (row k + k_max), one column per band. Eigenvectors
// are real with the largest-magnitude entry made positive.
struct BandSolution {
  double q = 0.0;
  int k_max = 0;
  Eigen::VectorXd energies;
  Eigen::MatrixXd coefficients;
};

// Bloch state label: band n, plane-wave index m in (-l, l], momentum
// offset eta0 so that q = m + eta0.
struct BlochLabel {
  int band_n = 0;
  int m = 0;
  double eta0 = 0.0;
};

inline constexpr int kDefaultKMax = 32;

// Diagonalizes the plane-wave (central equation) form of the ring-lattice
// eigenproblem: tridiagonal with diagonal E_r (q - 2 l k)^2 / l^2 + V/2 and
// off-diagonal V/4. With check_truncation the top requested band is compared
// against a 2 k_max solve and an error raised above 1e-6 E_r deviation.
BandSolution solve_bands(const RingLatticeParams& p, double q, int n_max,
                         int k_max = kDefaultKMax, bool check_truncation = true);

// Same eigenproblem at an explicit depth (time-dependent ramps).
BandSolution solve_bands_at_depth(const RingLatticeParams& p, double depth, double q, int n_max,
                                  int k_max = kDefaultKMax, bool check_truncation = true);

// Energies only (cheaper; no eigenvectors, no tie-breaking needed).
Eigen::VectorXd band_energies(const RingLatticeParams& p, double q, int n_max,
                              int k_max = kDefaultKMax);

// E^Theta_{n,m} = E_n(m + eta0) - hbar^2 eta0^2 / (2 I).
double band_energy_theta(const RingLatticeParams& p, const BlochLabel& label,
                         int k_max = kDefaultKMax);

// dE_n/dq computed by Hellmann-Feynman, cross-checked against a 5-point
// finite difference; disagreement beyond 1e-6 E_r raises NumericalError.
double group_velocity(const RingLatticeParams& p, int n, double q, int k_max = kDefaultKMax);

struct ShallowBands {
  double E0 = 0.0;
  double E1 = 0.0;
};

// Two-state closed forms for the lowest bands of a shallow lattice.
ShallowBands shallow_bands(const RingLatticeParams& p, double q);

// Theta_{n,m}(phi) = e^{i m phi} u_{n,m+eta0}(phi) sampled on an N-point
// grid (N must be a multiple of 2l), unit norm under the grid inner product.
WaveFunction bloch_state_on_ring(const RingLatticeParams& p, const BlochLabel& label, int grid_N,
                                 int k_max = kDefaultKMax);

}  // namespace ringlat
