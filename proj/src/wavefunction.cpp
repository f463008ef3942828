#include "ringlat/wavefunction.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "ringlat/errors.hpp"

namespace ringlat {

double WaveFunction::norm() const {
  const int N = size();
  if (N == 0) return 0.0;
  return std::sqrt(amplitudes.squaredNorm() * (2.0 * M_PI / N));
}

void WaveFunction::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw NumericalError("cannot normalize a zero wave function");
  amplitudes /= n;
}

Eigen::VectorXd angular_grid(int N) {
  if (N < 2) throw ValidationError("grid size must be >= 2");
  Eigen::VectorXd phi(N);
  for (int j = 0; j < N; ++j) phi[j] = -M_PI + 2.0 * M_PI * (j + 1) / N;
  return phi;
}

std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (a.size() != b.size()) throw ValidationError("wave functions live on different grids");
  return a.amplitudes.dot(b.amplitudes) * (2.0 * M_PI / a.size());
}

int momentum_of_slot(int slot, int N) { return slot < (N + 1) / 2 ? slot : slot - N; }

namespace {

// The grid starts at phi_0 = -pi + 2 pi / N, so mode m picks up the phase
// e^{i m phi_0} relative to a DFT that starts at zero.
Eigen::VectorXcd slot_phases(int N, double sign) {
  const double phi0 = -M_PI + 2.0 * M_PI / N;
  Eigen::VectorXcd ph(N);
  for (int i = 0; i < N; ++i) {
    const double m = momentum_of_slot(i, N);
    ph[i] = std::polar(1.0, sign * m * phi0);
  }
  return ph;
}

}  // namespace

Eigen::VectorXcd to_momentum(const Eigen::VectorXcd& position_amplitudes) {
  const int N = static_cast<int>(position_amplitudes.size());
  Eigen::FFT<double> fft;
  Eigen::VectorXcd out(N);
  fft.fwd(out.data(), position_amplitudes.data(), N);
  out /= static_cast<double>(N);
  return out.cwiseProduct(slot_phases(N, -1.0));
}

Eigen::VectorXcd to_position(const Eigen::VectorXcd& momentum_coefficients) {
  const int N = static_cast<int>(momentum_coefficients.size());
  Eigen::VectorXcd shifted = momentum_coefficients.cwiseProduct(slot_phases(N, +1.0));
  Eigen::FFT<double> fft;
  Eigen::VectorXcd out(N);
  fft.inv(out.data(), shifted.data(), N);
  out *= static_cast<double>(N);
  return out;
}

}  // namespace ringlat
