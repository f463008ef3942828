#include "ringlat/band_evolve.hpp"

#include <cmath>
#include <string>

#include "ringlat/errors.hpp"
#include "ringlat/ode.hpp"

namespace ringlat {

namespace {

// <u_n | cos^2(l phi) | u_n'> in the plane-wave basis: 1/2 on the diagonal
// of k, 1/4 on k +/- 1.
double cos2_element(const Eigen::MatrixXd& basis, int n, int np) {
  const int dim = static_cast<int>(basis.rows());
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    double v = 0.5 * basis(i, np);
    if (i > 0) v += 0.25 * basis(i - 1, np);
    if (i + 1 < dim) v += 0.25 * basis(i + 1, np);
    s += basis(i, n) * v;
  }
  return s;
}

// <Theta_{n,m} | L_z | Theta_{n',m}> / hbar = sum_k c^n_k c^n'_k (m - 2 l k).
double lz_element(const Eigen::MatrixXd& basis, int n, int np, int m, int l, int k_max) {
  const int dim = static_cast<int>(basis.rows());
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += basis(i, n) * basis(i, np) * (m - 2.0 * l * (i - k_max));
  return s;
}

}  // namespace

double BandBasisTrajectory::initial_population() const {
  return samples.front().coeffs.squaredNorm();
}

double BandBasisTrajectory::final_population() const {
  return samples.back().coeffs.squaredNorm();
}

BandBasisTrajectory evolve_band_basis(
    const std::map<std::pair<int, int>, std::complex<double>>& initial_coeffs,
    const RingLatticeParams& p, const DriveSchedule& schedule, double t0, double t1,
    const BandEvolveOptions& opts) {
  if (initial_coeffs.empty()) throw ValidationError("initial coefficients are empty");

  BandBasisTrajectory traj;
  traj.n_max = opts.n_max;
  traj.k_max = opts.k_max;
  for (const auto& [label, amp] : initial_coeffs) {
    (void)amp;
    if (label.first < 0 || label.first > opts.n_max)
      throw ValidationError("initial band index outside 0..n_max");
    if (label.second <= -p.azimuthal_l || label.second > p.azimuthal_l)
      throw ValidationError("initial m outside the first Brillouin zone");
    bool seen = false;
    for (int m : traj.m_sectors) seen = seen || (m == label.second);
    if (!seen) traj.m_sectors.push_back(label.second);
  }

  const int n_bands = opts.n_max + 1;
  const int n_sectors = static_cast<int>(traj.m_sectors.size());
  const int dim = n_bands * n_sectors;
  const double Er = p.recoil_energy_Er;

  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(dim);
  for (const auto& [label, amp] : initial_coeffs) {
    for (int s = 0; s < n_sectors; ++s)
      if (traj.m_sectors[s] == label.second) y[s * n_bands + label.first] = amp;
  }

  // Reference basis for sign alignment, refreshed on accepted steps.
  std::vector<Eigen::MatrixXd> reference(n_sectors);
  bool have_reference = false;

  const auto solve_sector = [&](int sector, double t, std::vector<Eigen::MatrixXd>& out_basis,
                                Eigen::VectorXd& out_energies) {
    const double eta = eta_of_t(schedule, p, t);
    const double V = schedule.depth(t);
    const double q = traj.m_sectors[sector] + eta;
    BandSolution sol = solve_bands_at_depth(p, V, q, opts.n_max, opts.k_max, false);
    if (have_reference) {
      for (int n = 0; n < n_bands; ++n) {
        if (reference[sector].col(n).dot(sol.coefficients.col(n)) < 0.0)
          sol.coefficients.col(n) *= -1.0;
      }
    }
    out_basis[sector] = std::move(sol.coefficients);
    out_energies = std::move(sol.energies);
  };

  std::vector<Eigen::MatrixXd> basis(n_sectors);

  const auto rhs = [&](double t, const Eigen::VectorXcd& c, Eigen::VectorXcd& dc) {
    const double eta = eta_of_t(schedule, p, t);
    const double s_rate = eta_rate(schedule, p, t);
    const double v_rate = schedule.depth.derivative(t);
    const std::complex<double> minus_i(0.0, -1.0);

    for (int sec = 0; sec < n_sectors; ++sec) {
      Eigen::VectorXd energies;
      solve_sector(sec, t, basis, energies);
      const int m = traj.m_sectors[sec];
      const double theta_shift = p.hbar * p.hbar * eta * eta / (2.0 * p.inertia_I);

      for (int n = 0; n < n_bands; ++n) {
        const int idx = sec * n_bands + n;
        std::complex<double> d = minus_i / p.hbar * (energies[n] - theta_shift) * c[idx];
        for (int np = 0; np < n_bands; ++np) {
          if (np == n) continue;
          // dH/dt = dV/dt cos^2(l phi) + (hbar s / I) * L_z
          double w = 0.0;
          if (v_rate != 0.0) w += v_rate * cos2_element(basis[sec], n, np);
          if (s_rate != 0.0)
            w += p.hbar * p.hbar * s_rate / p.inertia_I *
                 lz_element(basis[sec], n, np, m, p.azimuthal_l, opts.k_max);
          if (w == 0.0) continue;
          const double gap = energies[n] - energies[np];
          if (std::abs(gap) < 1e-8 * Er) {
            if (std::abs(w) < 1e-10 * Er) continue;  // symmetry-protected crossing
            throw NumericalError(
                "near-degenerate bands with finite coupling at t = " + std::to_string(t) +
                "; use the two-level model for this crossing");
          }
          d += (w / gap) * c[sec * n_bands + np];
        }
        dc[idx] = d;
      }
    }
  };

  std::vector<double> sample_times;
  const int ns = std::max(2, opts.n_samples);
  for (int i = 0; i < ns; ++i)
    sample_times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / (ns - 1));

  const auto record = [&](double t, const Eigen::VectorXcd& c) {
    BandBasisSample smp;
    smp.t = t;
    smp.eta = eta_of_t(schedule, p, t);
    smp.depth = schedule.depth(t);
    smp.coeffs.resize(n_bands, n_sectors);
    for (int sec = 0; sec < n_sectors; ++sec)
      for (int n = 0; n < n_bands; ++n) smp.coeffs(n, sec) = c[sec * n_bands + n];
    smp.basis.resize(n_sectors);
    Eigen::VectorXd energies;
    for (int sec = 0; sec < n_sectors; ++sec) solve_sector(sec, t, smp.basis, energies);
    traj.samples.push_back(std::move(smp));
  };

  // Seed the alignment reference at t0.
  {
    Eigen::VectorXd energies;
    for (int sec = 0; sec < n_sectors; ++sec) solve_sector(sec, t0, reference, energies);
    have_reference = true;
  }

  const auto on_accept = [&](double t, const Eigen::VectorXcd&) {
    Eigen::VectorXd energies;
    for (int sec = 0; sec < n_sectors; ++sec) solve_sector(sec, t, reference, energies);
  };

  OdeOptions ode_opts;
  ode_opts.rel_tol = opts.rel_tol;
  ode_opts.abs_tol = opts.abs_tol;
  integrate_rk45(rhs, t0, t1, y, sample_times, record, ode_opts, on_accept);

  const double drift = std::abs(traj.final_population() - traj.initial_population());
  if (drift > 1e-8)
    throw NumericalError("band-basis population drifted by " + std::to_string(drift) +
                         "; truncation n_max = " + std::to_string(opts.n_max) +
                         " is too small for this drive");
  return traj;
}

WaveFunction band_basis_state(const RingLatticeParams& p, const BandBasisTrajectory& traj,
                              const BandBasisSample& sample, int grid_N) {
  if (grid_N < 2 || grid_N % (2 * p.azimuthal_l) != 0)
    throw ValidationError("grid size must be a positive multiple of 2 l");
  const Eigen::VectorXd phi = angular_grid(grid_N);
  WaveFunction psi;
  psi.amplitudes = Eigen::VectorXcd::Zero(grid_N);
  const int n_bands = traj.n_max + 1;
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * M_PI);
  for (int sec = 0; sec < static_cast<int>(traj.m_sectors.size()); ++sec) {
    const int m = traj.m_sectors[sec];
    for (int j = 0; j < grid_N; ++j) {
      std::complex<double> u(0.0, 0.0);
      for (int n = 0; n < n_bands; ++n) {
        const std::complex<double> amp = sample.coeffs(n, sec);
        if (amp == std::complex<double>(0.0, 0.0)) continue;
        std::complex<double> un(0.0, 0.0);
        for (int i = 0; i < sample.basis[sec].rows(); ++i) {
          const int k = i - traj.k_max;
          un += sample.basis[sec](i, n) * std::polar(1.0, -2.0 * p.azimuthal_l * k * phi[j]);
        }
        u += amp * un;
      }
      psi.amplitudes[j] += u * std::polar(inv_sqrt2pi, static_cast<double>(m) * phi[j]);
    }
  }
  return psi;
}

double band_basis_mean_lz(const RingLatticeParams& p, const BandBasisTrajectory& traj,
                          const BandBasisSample& sample) {
  const int n_bands = traj.n_max + 1;
  double num = 0.0, den = 0.0;
  for (int sec = 0; sec < static_cast<int>(traj.m_sectors.size()); ++sec) {
    const int m = traj.m_sectors[sec];
    for (int n = 0; n < n_bands; ++n) {
      for (int np = 0; np < n_bands; ++np) {
        const std::complex<double> w =
            std::conj(sample.coeffs(n, sec)) * sample.coeffs(np, sec);
        if (w == std::complex<double>(0.0, 0.0)) continue;
        num += (w * lz_element(sample.basis[sec], n, np, m, p.azimuthal_l, traj.k_max)).real();
      }
      den += std::norm(sample.coeffs(n, sec));
    }
  }
  return num / den;
}

}  // namespace ringlat
