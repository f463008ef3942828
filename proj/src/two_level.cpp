#include "ringlat/two_level.hpp"

#include <cmath>

#include "ringlat/errors.hpp"
#include "ringlat/ode.hpp"

namespace ringlat {

TwoLevelResult two_level_evolve(const RingLatticeParams& p, double s, double eta_start,
                                double eta_end, int n_samples) {
  if (!(s > 0.0)) throw ValidationError("ramp rate s must be > 0");
  if (!(eta_end > eta_start)) throw ValidationError("eta span must be increasing");

  const double Er = p.recoil_energy_Er;
  const double V = p.depth_V;
  const double l = p.azimuthal_l;
  const double hbar = p.hbar;

  // Symmetric form: i hbar dD0/dt = -Delta D0 + (V/4) D1,
  //                 i hbar dD1/dt = +Delta D1 + (V/4) D0,
  // Delta(t) = 2 E_r (1 - eta(t)/l), eta = s t. The common phase phi0
  // relating D to the bare amplitudes d has the closed form below.
  const auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    const double delta = 2.0 * Er * (1.0 - s * t / l);
    const std::complex<double> minus_i_over_hbar(0.0, -1.0 / hbar);
    dy[0] = minus_i_over_hbar * (-delta * y[0] + 0.25 * V * y[1]);
    dy[1] = minus_i_over_hbar * (+delta * y[1] + 0.25 * V * y[0]);
  };

  const auto phi0 = [&](double t) {
    return (2.0 * Er * (t - s * t * t / (2.0 * l)) + 0.5 * V * t) / hbar;
  };

  const double t0 = eta_start / s;
  const double t1 = eta_end / s;

  Eigen::VectorXcd y(2);
  y[0] = 1.0;
  y[1] = 0.0;

  TwoLevelResult res;
  std::vector<double> sample_times;
  const int ns = std::max(2, n_samples);
  for (int i = 0; i < ns; ++i)
    sample_times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / (ns - 1));

  OdeOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12;
  integrate_rk45(rhs, t0, t1, y, sample_times,
                 [&](double t, const Eigen::VectorXcd& c) {
                   res.times.push_back(t);
                   res.eta.push_back(s * t);
                   const std::complex<double> unphase = std::polar(1.0, -phi0(t));
                   res.d0.push_back(unphase * c[0]);
                   res.d1.push_back(unphase * c[1]);
                 },
                 opts);

  res.transmitted_fraction = std::norm(res.d0.back());
  return res;
}

}  // namespace ringlat
