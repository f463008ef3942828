#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ringlat/bands.hpp"
#include "ringlat/params.hpp"
#include "ringlat/schedule.hpp"
#include "ringlat/wavefunction.hpp"

namespace ringlat {

struct BandEvolveOptions {
  int n_max = 8;       // highest band kept in the expansion
  int k_max = kDefaultKMax;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int n_samples = 51;  // uniformly spaced sample instants including ends
};

// One recorded instant of the band-basis evolution: amplitudes c_{n,m} in
// the instantaneous (parallel-transported) Bloch basis together with the
// eigenvector matrices that define that basis at the sample time.
struct BandBasisSample {
  double t = 0.0;
  double eta = 0.0;
  double depth = 0.0;
  // coeffs(n, s): band n, m-sector s (sector order fixed by the trajectory)
  Eigen::MatrixXcd coeffs;
  // one (2 k_max + 1) x (n_max + 1) eigenvector matrix per m-sector
  std::vector<Eigen::MatrixXd> basis;
};

struct BandBasisTrajectory {
  std::vector<int> m_sectors;  // momentum residues carried by the state
  int n_max = 0;
  int k_max = 0;
  std::vector<BandBasisSample> samples;

  double initial_population() const;
  double final_population() const;
};

// Integrates the coupled amplitudes of the instantaneous Bloch expansion:
// dc_n/dt = -(i/hbar) E^Theta_n c_n + sum_{n' != n} <n|dH/dt|n'> /
// (E_n - E_{n'}) c_{n'}, with dH/dt collecting the depth ramp and the
// rotation ramp. Distinct momentum residues m never couple. Eigenvector
// continuity is kept by sign alignment against the previous accepted step.
BandBasisTrajectory evolve_band_basis(
    const std::map<std::pair<int, int>, std::complex<double>>& initial_coeffs,
    const RingLatticeParams& p, const DriveSchedule& schedule, double t0, double t1,
    const BandEvolveOptions& opts = {});

// Grid-state reconstruction of one recorded sample.
WaveFunction band_basis_state(const RingLatticeParams& p, const BandBasisTrajectory& traj,
                              const BandBasisSample& sample, int grid_N);

// <L_z> of one recorded sample, in hbar units.
double band_basis_mean_lz(const RingLatticeParams& p, const BandBasisTrajectory& traj,
                          const BandBasisSample& sample);

}  // namespace ringlat
