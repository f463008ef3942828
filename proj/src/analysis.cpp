#include "ringlat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "ringlat/errors.hpp"
#include "ringlat/quadrature.hpp"

namespace ringlat {

double ObservableTrace::sample_dt() const {
  if (times.size() < 2) throw ValidationError("trace needs at least two samples");
  const double dt = times[1] - times[0];
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    const double d = times[i + 1] - times[i];
    if (std::abs(d - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw ValidationError("trace samples are not uniformly spaced");
  }
  return dt;
}

double mean_angular_momentum(const WaveFunction& state) {
  const Eigen::VectorXcd c = to_momentum(state.amplitudes);
  const int N = state.size();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < N; ++i) {
    const double w = std::norm(c[i]);
    num += momentum_of_slot(i, N) * w;
    den += w;
  }
  return num / den;
}

double adiabatic_prediction(const RingLatticeParams& p, double eta, AdiabaticMode mode,
                            int k_max) {
  if (mode == AdiabaticMode::ShallowClosedForm) {
    const double w = p.depth_V * p.azimuthal_l / (8.0 * p.recoil_energy_Er);
    const double x = eta - p.azimuthal_l;
    return -p.hbar * p.azimuthal_l * (1.0 + x / std::sqrt(x * x + w * w));
  }
  const double dE = group_velocity(p, 0, eta, k_max);
  return -p.hbar * eta + p.inertia_I / p.hbar * dE;
}

ObservableTrace trace_derivative(const ObservableTrace& trace) {
  const std::size_t n = trace.size();
  if (n < 5) throw ValidationError("derivative needs at least 5 samples");
  const double h = trace.sample_dt();
  const auto& f = trace.values;

  ObservableTrace out;
  out.times = trace.times;
  out.value_name = "dLz_dt";
  out.metadata = trace.metadata;
  out.values.resize(n);

  out.values[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
  out.values[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    out.values[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  out.values[n - 2] =
      (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
  out.values[n - 1] =
      (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) /
      (12.0 * h);
  return out;
}

BlochSignature detect_bloch_signature(const ObservableTrace& derivative,
                                      const DetectionOptions& opts) {
  const std::size_t n = derivative.size();
  if (n < 5) throw DetectionError("derivative trace too short for peak detection");
  const double h = derivative.sample_dt();
  const auto& v = derivative.values;

  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(v[i]);
  std::nth_element(mags.begin(), mags.begin() + n / 2, mags.end());
  const double median_abs = mags[n / 2];
  const double floor = opts.threshold_factor * median_abs;

  BlochSignature sig;
  std::vector<double> depths;
  std::vector<double> widths;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(v[i] < 0.0)) continue;
    if (!(std::abs(v[i]) > floor)) continue;
    if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1])) continue;
    if (v[i] == v[i + 1]) continue;  // plateau: take the left sample only

    // Parabolic refinement through the three samples around the minimum.
    const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
    double t_peak = derivative.times[i];
    double v_peak = v[i];
    if (denom > 0.0) {
      const double shift = 0.5 * (v[i - 1] - v[i + 1]) / denom;
      t_peak += shift * h;
      v_peak = v[i] - 0.125 * (v[i - 1] - v[i + 1]) * (v[i - 1] - v[i + 1]) / denom;
    }
    sig.peak_times.push_back(t_peak);
    depths.push_back(std::abs(v_peak));

    // FWHM by linear interpolation at half depth on both flanks.
    const double half = 0.5 * v_peak;
    double t_left = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = i; j-- > 0;) {
      if (v[j] > half) {
        t_left = derivative.times[j] +
                 h * (half - v[j]) / (v[j + 1] - v[j]);
        break;
      }
    }
    double t_right = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[j] > half) {
        t_right = derivative.times[j - 1] +
                  h * (half - v[j - 1]) / (v[j] - v[j - 1]);
        break;
      }
    }
    if (std::isfinite(t_left) && std::isfinite(t_right)) widths.push_back(t_right - t_left);
  }

  if (sig.peak_times.size() < 2)
    throw DetectionError("found " + std::to_string(sig.peak_times.size()) +
                         " derivative peak(s); need at least 2 (longer rotation time?)");

  double spacing = 0.0;
  for (std::size_t i = 0; i + 1 < sig.peak_times.size(); ++i)
    spacing += sig.peak_times[i + 1] - sig.peak_times[i];
  sig.t_B = spacing / (sig.peak_times.size() - 1);

  sig.peak_amplitude_A = 0.0;
  for (double d : depths) sig.peak_amplitude_A += d;
  sig.peak_amplitude_A /= depths.size();

  if (!widths.empty()) {
    sig.fwhm = 0.0;
    for (double w : widths) sig.fwhm += w;
    sig.fwhm /= widths.size();
  } else {
    sig.fwhm = std::numeric_limits<double>::quiet_NaN();
  }
  return sig;
}

namespace {

// Sign-align b against a (real eigenvectors); returns the aligned copy.
Eigen::VectorXd aligned(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(b) < 0.0 ? Eigen::VectorXd(-b) : b;
}

}  // namespace

AdiabaticPhases phases(const RingLatticeParams& p, const DriveSchedule& schedule, double t0,
                       double t1, int n_path_steps, int k_max) {
  AdiabaticPhases out;

  const auto energy_theta = [&](double t) {
    const double eta = eta_of_t(schedule, p, t);
    const double e0 = solve_bands_at_depth(p, schedule.depth(t), eta, 0, k_max, false).energies[0];
    return e0 - p.hbar * p.hbar * eta * eta / (2.0 * p.inertia_I);
  };
  out.dynamical =
      -integrate_adaptive(energy_theta, t0, t1, 1e-10, 1e-12).value / p.hbar;

  // Discrete geometric phase along the path with parallel transport. Real
  // eigenvectors keep each aligned overlap real positive, so the imaginary
  // accumulation measures departures from that alignment.
  double geom = 0.0;
  Eigen::VectorXd u_prev;
  for (int i = 0; i <= n_path_steps; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / n_path_steps;
    const double eta = eta_of_t(schedule, p, t);
    Eigen::VectorXd u =
        solve_bands_at_depth(p, schedule.depth(t), eta, 0, k_max, false).coefficients.col(0);
    if (i > 0) {
      u = aligned(u_prev, u);
      const double overlap = u_prev.dot(u);
      geom -= std::atan2(0.0, overlap);  // Im log of a real overlap: 0 or pi
    }
    u_prev = u;
  }
  out.geometric = geom;
  out.transported_u_end = u_prev;
  return out;
}

double geometric_phase_loop(const RingLatticeParams& p, double eta0, int n_path_steps,
                            int k_max) {
  const int l2 = 2 * p.azimuthal_l;
  std::complex<double> product(1.0, 0.0);
  Eigen::VectorXd u_first, u_prev;
  for (int i = 0; i <= n_path_steps; ++i) {
    const double eta = eta0 + l2 * static_cast<double>(i) / n_path_steps;
    Eigen::VectorXd u = solve_bands(p, eta, 0, k_max, false).coefficients.col(0);
    if (i == 0) {
      u_first = u;
    } else {
      product *= std::complex<double>(u_prev.dot(u), 0.0);
    }
    u_prev = u;
  }
  // Close the loop: u at eta0 + 2l equals u at eta0 with k relabelled by one.
  Eigen::VectorXd shifted = Eigen::VectorXd::Zero(u_first.size());
  for (int i = 1; i < u_first.size(); ++i) shifted[i] = u_first[i - 1];
  product *= std::complex<double>(u_prev.dot(shifted), 0.0);
  return -std::arg(product);
}

}  // namespace ringlat
