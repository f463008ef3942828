#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ringlat {

// State on the uniform periodic angular grid phi_j = -pi + 2 pi (j+1)/N,
// j = 0..N-1, normalized so that sum |psi_j|^2 (2 pi / N) = 1.
struct WaveFunction {
  Eigen::VectorXcd amplitudes;

  int size() const { return static_cast<int>(amplitudes.size()); }
  double norm() const;
  void normalize();
};

// Grid angles for an N-point ring.
Eigen::VectorXd angular_grid(int N);

// <a|b> = sum conj(a_j) b_j (2 pi / N).
std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b);

// Angular-momentum slot m held by FFT slot i (standard layout: 0..N/2-1,
// then -N/2..-1).
int momentum_of_slot(int slot, int N);

// Decomposition psi(phi) = sum_m c_m e^{i m phi} on the shifted grid;
// coefficients in FFT slot order. to_position inverts it.
Eigen::VectorXcd to_momentum(const Eigen::VectorXcd& position_amplitudes);
Eigen::VectorXcd to_position(const Eigen::VectorXcd& momentum_coefficients);

}  // namespace ringlat
