#pragma once

#include <complex>
#include <vector>

#include "ringlat/params.hpp"

namespace ringlat {

// Two-state crossing model of the lowest zone-edge gap: the torus states
// k = 0 and k = 1 coupled by V/4 with detuning 2 E_r (1 - eta/l), driven
// through the edge by eta(t) = s t.
struct TwoLevelResult {
  std::vector<double> times;
  std::vector<double> eta;
  std::vector<std::complex<double>> d0;  // amplitude on e^{i 0 phi}
  std::vector<std::complex<double>> d1;  // amplitude on e^{-i 2 l phi}
  // |d0|^2 after the passage: the fraction that jumped to the upper band
  // (the adiabatic branch transfers to d1 across the edge).
  double transmitted_fraction = 0.0;
};

TwoLevelResult two_level_evolve(const RingLatticeParams& p, double s, double eta_start,
                                double eta_end, int n_samples = 201);

}  // namespace ringlat
