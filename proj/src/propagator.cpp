#include "ringlat/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <unsupported/Eigen/FFT>

#include "ringlat/errors.hpp"

namespace ringlat {

namespace {

using Complex = std::complex<double>;

// The stepper works with raw DFT coefficients b_m of the grid samples
// (psi_j = sum_m b_m e^{2 pi i m j / N}). Every momentum-space operation
// here is a diagonal per-m phase, identical on b_m and on the e^{i m phi}
// expansion coefficients, and inv(b) lands exactly on the grid angles.
Eigen::VectorXcd raw_coefficients(const Eigen::VectorXcd& psi) {
  const int N = static_cast<int>(psi.size());
  Eigen::FFT<double> fft;
  Eigen::VectorXcd b(N);
  fft.fwd(b.data(), psi.data(), N);
  b /= static_cast<double>(N);
  return b;
}

Eigen::VectorXcd raw_samples(const Eigen::VectorXcd& b) {
  const int N = static_cast<int>(b.size());
  Eigen::FFT<double> fft;
  Eigen::VectorXcd psi(N);
  fft.inv(psi.data(), b.data(), N);
  psi *= static_cast<double>(N);
  return psi;
}

class StrangStepper {
 public:
  StrangStepper(const RingLatticeParams& p, const DriveSchedule& schedule, int N, Frame frame)
      : p_(p), schedule_(schedule), N_(N), frame_(frame), phi_(angular_grid(N)) {
    m_.resize(N);
    for (int i = 0; i < N; ++i) m_[i] = momentum_of_slot(i, N);
    cos2_.resize(N);
    for (int j = 0; j < N; ++j) {
      const double c = std::cos(p.azimuthal_l * phi_[j]);
      cos2_[j] = c * c;
    }
    zpow_.resize(N / 2 + 1);
    pot_phase_.resize(N);
    kin_free_.resize(N);
    pos_.resize(N);
  }

  // One Strang step from t to t + dt (dt may be negative).
  void step(Eigen::VectorXcd& c, double t, double dt) {
    const double tm = t + 0.5 * dt;
    const double V = schedule_.depth(tm);
    if (V < 0.0) throw ValidationError("depth program went negative at t = " + std::to_string(tm));
    const double Om = frame_ == Frame::Corotating ? omega_eff(schedule_, p_.azimuthal_l, tm)
                                                  : schedule_.rotation(tm);
    const double a = frame_ == Frame::Lab ? chirp_phase(schedule_, tm) : 0.0;

    prepare_kinetic(dt, Om);
    prepare_potential(dt, V, a);

    apply_kinetic_half(c);
    fft_.inv(pos_.data(), c.data(), N_);
    for (int j = 0; j < N_; ++j) pos_[j] *= pot_phase_[j];
    fft_.fwd(c.data(), pos_.data(), N_);
    apply_kinetic_half(c);
  }

 private:
  void apply_kinetic_half(Eigen::VectorXcd& c) {
    for (int i = 0; i < N_; ++i) {
      const int m = m_[i];
      const Complex rot = m >= 0 ? zpow_[m] : std::conj(zpow_[-m]);
      c[i] *= kin_free_[i] * rot;
    }
  }

  void prepare_kinetic(double dt, double Om) {
    if (dt != cached_dt_) {
      // exp(-i (dt/2) hbar m^2 / (2 I)) per slot
      const double f = 0.5 * dt * p_.hbar / (2.0 * p_.inertia_I);
      for (int i = 0; i < N_; ++i) kin_free_[i] = std::polar(1.0, -f * m_[i] * m_[i]);
      cached_dt_ = dt;
      cached_Om_ = std::numeric_limits<double>::quiet_NaN();
    }
    if (Om != cached_Om_) {
      // exp(+i (dt/2) m Omega) built as powers of one unimodular factor
      const Complex z = std::polar(1.0, 0.5 * dt * Om);
      zpow_[0] = Complex(1.0, 0.0);
      for (int m = 1; m < static_cast<int>(zpow_.size()); ++m) zpow_[m] = zpow_[m - 1] * z;
      cached_Om_ = Om;
    }
  }

  void prepare_potential(double dt, double V, double a) {
    if (V == cached_V_ && a == cached_a_ && dt == cached_pot_dt_) return;
    const double f = dt / p_.hbar * V;
    if (a == 0.0) {
      for (int j = 0; j < N_; ++j) pot_phase_[j] = std::polar(1.0, -f * cos2_[j]);
    } else {
      for (int j = 0; j < N_; ++j) {
        const double c = std::cos(p_.azimuthal_l * phi_[j] - a);
        pot_phase_[j] = std::polar(1.0, -f * c * c);
      }
    }
    cached_V_ = V;
    cached_a_ = a;
    cached_pot_dt_ = dt;
  }

  const RingLatticeParams& p_;
  const DriveSchedule& schedule_;
  int N_;
  Frame frame_;
  Eigen::VectorXd phi_;
  std::vector<int> m_;
  Eigen::VectorXd cos2_;
  std::vector<Complex> zpow_;
  Eigen::VectorXcd pot_phase_;
  Eigen::VectorXcd kin_free_;
  Eigen::VectorXcd pos_;
  Eigen::FFT<double> fft_;
  double cached_dt_ = std::numeric_limits<double>::quiet_NaN();
  double cached_Om_ = std::numeric_limits<double>::quiet_NaN();
  double cached_V_ = std::numeric_limits<double>::quiet_NaN();
  double cached_a_ = std::numeric_limits<double>::quiet_NaN();
  double cached_pot_dt_ = std::numeric_limits<double>::quiet_NaN();
};

double momentum_norm_sq(const Eigen::VectorXcd& c) { return c.squaredNorm() * 2.0 * M_PI; }

double momentum_mean_lz(const Eigen::VectorXcd& c, double hbar) {
  const int N = static_cast<int>(c.size());
  double num = 0.0, den = 0.0;
  for (int i = 0; i < N; ++i) {
    const double w = std::norm(c[i]);
    num += momentum_of_slot(i, N) * w;
    den += w;
  }
  return hbar * num / den;
}

int substeps_for(const DriveSchedule& s, const RingLatticeParams& p, double t, double dt,
                 double max_change) {
  const double Er = p.recoil_energy_Er;
  const double wr = p.recoil_frequency_wr;
  const double v0 = s.depth(t), v1 = s.depth(t + dt);
  const double dv = std::abs(v1 - v0) / std::max({std::abs(v0), std::abs(v1), Er});
  const double o0 = omega_eff(s, p.azimuthal_l, t), o1 = omega_eff(s, p.azimuthal_l, t + dt);
  const double dom = std::abs(o1 - o0) / std::max({std::abs(o0), std::abs(o1), 0.01 * wr});
  const double change = std::max(dv, dom);
  if (change <= max_change) return 1;
  const int n = static_cast<int>(std::ceil(change / max_change));
  return std::min(n, 1 << 12);
}

}  // namespace

Trajectory evolve(const WaveFunction& initial, const RingLatticeParams& p,
                  const DriveSchedule& schedule, double t0, double t1,
                  const EvolveOptions& opts) {
  const int N = initial.size();
  if (N < 2) throw ValidationError("initial state is empty");
  if (N % (2 * p.azimuthal_l) != 0)
    throw ValidationError("grid size must be a multiple of 2 l");
  if (std::abs(initial.norm() - 1.0) > 1e-8)
    throw ValidationError("initial state must be normalized");
  if (!(std::abs(opts.dt) > 0.0)) throw ValidationError("dt must be nonzero");
  if (std::abs(opts.dt) > 0.01 / p.recoil_frequency_wr * (1.0 + 1e-12))
    throw ValidationError("dt exceeds the 0.01/w_r guard");
  if (opts.sample_every < 1) throw ValidationError("sample_every must be >= 1");

  const double span = t1 - t0;
  long n_steps = std::llround(std::abs(span) / std::abs(opts.dt));
  if (n_steps < 1) n_steps = 1;
  // Round the step count up to a sample multiple so samples stay uniform.
  const long rem = n_steps % opts.sample_every;
  if (rem != 0) n_steps += opts.sample_every - rem;
  const double dt = span / static_cast<double>(n_steps);

  Trajectory traj;
  traj.frame = opts.frame;

  StrangStepper stepper(p, schedule, N, opts.frame);
  Eigen::VectorXcd c = raw_coefficients(initial.amplitudes);

  const auto sample = [&](long step_index) {
    const double t = t0 + dt * static_cast<double>(step_index);
    const double nrm2 = momentum_norm_sq(c);
    if (!std::isfinite(nrm2)) throw NumericalError("propagation produced a non-finite state");
    const double nrm = std::sqrt(nrm2);
    if (std::abs(nrm - 1.0) > 1e-8)
      throw NumericalError("norm drifted to " + std::to_string(nrm) + " at t = " +
                           std::to_string(t));
    traj.times.push_back(t);
    traj.norms.push_back(nrm);
    traj.Lz.push_back(momentum_mean_lz(c, p.hbar));
    if (opts.store_states) {
      WaveFunction w;
      w.amplitudes = raw_samples(c);
      traj.states.push_back(std::move(w));
    }
  };

  sample(0);
  for (long step = 0; step < n_steps; ++step) {
    const double t = t0 + dt * static_cast<double>(step);
    const int nsub = substeps_for(schedule, p, t, dt, opts.max_coefficient_change);
    const double h = dt / nsub;
    for (int k = 0; k < nsub; ++k) stepper.step(c, t + k * h, h);
    if ((step + 1) % opts.sample_every == 0) sample(step + 1);
  }
  return traj;
}

WaveFunction gauge_map(const WaveFunction& state, double a, int azimuthal_l,
                       GaugeDirection direction) {
  const int N = state.size();
  Eigen::VectorXcd c = to_momentum(state.amplitudes);
  const double sign = direction == GaugeDirection::ToCorotating ? +1.0 : -1.0;
  for (int i = 0; i < N; ++i) {
    const double m = momentum_of_slot(i, N);
    c[i] *= std::polar(1.0, sign * m * a / azimuthal_l);
  }
  WaveFunction out;
  out.amplitudes = to_position(c);
  return out;
}

}  // namespace ringlat
