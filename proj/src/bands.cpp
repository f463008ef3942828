#include "ringlat/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ringlat/errors.hpp"

namespace ringlat {

namespace {

void fill_tridiagonal(const RingLatticeParams& p, double depth, double q, int k_max,
                      Eigen::VectorXd& diag, Eigen::VectorXd& subdiag) {
  const int dim = 2 * k_max + 1;
  const double l = p.azimuthal_l;
  diag.resize(dim);
  subdiag.resize(dim - 1);
  for (int i = 0; i < dim; ++i) {
    const double k = i - k_max;
    const double x = q - 2.0 * l * k;
    diag[i] = p.recoil_energy_Er * x * x / (l * l) + 0.5 * depth;
  }
  subdiag.setConstant(0.25 * depth);
}

Eigen::VectorXd tridiagonal_eigenvalues(const RingLatticeParams& p, double depth, double q,
                                        int k_max) {
  Eigen::VectorXd diag, subdiag;
  fill_tridiagonal(p, depth, q, k_max, diag, subdiag);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");
  return es.eigenvalues();
}

// Mean plane-wave momentum <u| -i d/dphi |u> = -2 l sum_k |c_k|^2 k.
double mean_plane_wave_momentum(const Eigen::VectorXd& c, int l, int k_max) {
  double pm = 0.0;
  for (int i = 0; i < c.size(); ++i) pm += c[i] * c[i] * (-2.0 * l * (i - k_max));
  return pm;
}

}  // namespace

BandSolution solve_bands_at_depth(const RingLatticeParams& p, double depth, double q, int n_max,
                                  int k_max, bool check_truncation) {
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  if (k_max < n_max + 4) throw ValidationError("k_max must be >= n_max + 4");
  if (!(depth >= 0.0)) throw ValidationError("depth_V must be >= 0");

  Eigen::VectorXd diag, subdiag;
  fill_tridiagonal(p, depth, q, k_max, diag, subdiag);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");

  const int dim = 2 * k_max + 1;
  const int n_bands = n_max + 1;

  // Deterministic ordering at (near-)degeneracies: energy, then
  // |<-i d/dphi>| ascending, then the signed value descending.
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> pmom(dim);
  for (int i = 0; i < dim; ++i)
    pmom[i] = mean_plane_wave_momentum(es.eigenvectors().col(i), p.azimuthal_l, k_max);
  const double tie_tol = 1e-11 * std::max(1.0, std::abs(es.eigenvalues()[dim - 1]));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ea = es.eigenvalues()[a], eb = es.eigenvalues()[b];
    if (std::abs(ea - eb) > tie_tol) return ea < eb;
    if (std::abs(std::abs(pmom[a]) - std::abs(pmom[b])) > 1e-9)
      return std::abs(pmom[a]) < std::abs(pmom[b]);
    return pmom[a] > pmom[b];
  });

  BandSolution sol;
  sol.q = q;
  sol.k_max = k_max;
  sol.energies.resize(n_bands);
  sol.coefficients.resize(dim, n_bands);
  for (int n = 0; n < n_bands; ++n) {
    const int src = order[n];
    sol.energies[n] = es.eigenvalues()[src];
    Eigen::VectorXd col = es.eigenvectors().col(src);
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col[imax] < 0.0) col = -col;
    sol.coefficients.col(n) = col;
  }

  if (check_truncation) {
    const Eigen::VectorXd wide = tridiagonal_eigenvalues(p, depth, q, 2 * k_max);
    const double drift = std::abs(wide[n_max] - sol.energies[n_max]);
    if (drift > 1e-6 * p.recoil_energy_Er)
      throw NumericalError("k_max too small: band " + std::to_string(n_max) +
                           " moves by " + std::to_string(drift) +
                           " under truncation doubling");
  }
  return sol;
}

BandSolution solve_bands(const RingLatticeParams& p, double q, int n_max, int k_max,
                         bool check_truncation) {
  return solve_bands_at_depth(p, p.depth_V, q, n_max, k_max, check_truncation);
}

Eigen::VectorXd band_energies(const RingLatticeParams& p, double q, int n_max, int k_max) {
  if (k_max < n_max + 4) throw ValidationError("k_max must be >= n_max + 4");
  return tridiagonal_eigenvalues(p, p.depth_V, q, k_max).head(n_max + 1);
}

double band_energy_theta(const RingLatticeParams& p, const BlochLabel& label, int k_max) {
  if (label.band_n < 0) throw ValidationError("band index must be >= 0");
  if (label.m <= -p.azimuthal_l || label.m > p.azimuthal_l)
    throw ValidationError("m must lie in the first Brillouin zone (-l, l]");
  const double q = label.m + label.eta0;
  const Eigen::VectorXd e = band_energies(p, q, label.band_n, k_max);
  return e[label.band_n] -
         p.hbar * p.hbar * label.eta0 * label.eta0 / (2.0 * p.inertia_I);
}

double group_velocity(const RingLatticeParams& p, int n, double q, int k_max) {
  const BandSolution sol = solve_bands(p, q, n, k_max, false);
  const double pm = mean_plane_wave_momentum(sol.coefficients.col(n), p.azimuthal_l, k_max);
  const double hf = p.hbar * p.hbar / p.inertia_I * (q + pm);

  const double h = 1e-4;
  const double em2 = band_energies(p, q - 2 * h, n, k_max)[n];
  const double em1 = band_energies(p, q - h, n, k_max)[n];
  const double ep1 = band_energies(p, q + h, n, k_max)[n];
  const double ep2 = band_energies(p, q + 2 * h, n, k_max)[n];
  const double fd = (em2 - 8.0 * em1 + 8.0 * ep1 - ep2) / (12.0 * h);

  if (std::abs(hf - fd) > 1e-6 * p.recoil_energy_Er)
    throw NumericalError("group velocity routes disagree at q = " + std::to_string(q) +
                         ": Hellmann-Feynman " + std::to_string(hf) + ", finite difference " +
                         std::to_string(fd) + " (near-degenerate bands?)");
  return hf;
}

ShallowBands shallow_bands(const RingLatticeParams& p, double q) {
  if (!(p.depth_V >= 0.0)) throw ValidationError("depth_V must be >= 0");
  const double Er = p.recoil_energy_Er;
  const double V = p.depth_V;
  const double x = 1.0 - q / p.azimuthal_l;
  const double mean = 0.5 * V + Er * (1.0 + x * x);
  const double split = std::sqrt(V * V / 16.0 + 4.0 * Er * Er * x * x);
  return {mean - split, mean + split};
}

WaveFunction bloch_state_on_ring(const RingLatticeParams& p, const BlochLabel& label, int grid_N,
                                 int k_max) {
  if (label.band_n < 0) throw ValidationError("band index must be >= 0");
  if (label.m <= -p.azimuthal_l || label.m > p.azimuthal_l)
    throw ValidationError("m must lie in the first Brillouin zone (-l, l]");
  if (grid_N < 2 || grid_N % (2 * p.azimuthal_l) != 0)
    throw ValidationError("grid size must be a positive multiple of 2 l");

  const double q = label.m + label.eta0;
  const BandSolution sol = solve_bands(p, q, label.band_n, k_max);
  const Eigen::VectorXd c = sol.coefficients.col(label.band_n);

  const Eigen::VectorXd phi = angular_grid(grid_N);
  WaveFunction psi;
  psi.amplitudes.resize(grid_N);
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * M_PI);
  for (int j = 0; j < grid_N; ++j) {
    std::complex<double> u(0.0, 0.0);
    for (int i = 0; i < c.size(); ++i) {
      const int k = i - k_max;
      u += c[i] * std::polar(1.0, -2.0 * p.azimuthal_l * k * phi[j]);
    }
    psi.amplitudes[j] = u * std::polar(inv_sqrt2pi, label.m * phi[j]);
  }
  psi.normalize();
  return psi;
}

}  // namespace ringlat
