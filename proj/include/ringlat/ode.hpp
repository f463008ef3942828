#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "ringlat/errors.hpp"

namespace ringlat {

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 0.0;   // 0 -> span/100
  double max_step = 0.0;       // 0 -> unbounded
  long max_steps = 50'000'000;
};

// Dormand-Prince 5(4) with step-size control. f(t, y, dydt) fills the
// derivative; on_sample fires at t0, at every requested sample time and at
// t1; on_accept (optional) fires after every accepted internal step.
inline void integrate_rk45(
    const std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>& f, double t0,
    double t1, Eigen::VectorXcd y, const std::vector<double>& sample_times,
    const std::function<void(double, const Eigen::VectorXcd&)>& on_sample,
    const OdeOptions& opts = {},
    const std::function<void(double, const Eigen::VectorXcd&)>& on_accept = nullptr) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double span = t1 - t0;
  if (span == 0.0) {
    if (on_sample) on_sample(t0, y);
    return;
  }
  const double dir = span > 0 ? 1.0 : -1.0;

  std::vector<double> stops(sample_times);
  stops.push_back(t1);
  std::sort(stops.begin(), stops.end(),
            [dir](double a, double b) { return dir * a < dir * b; });

  const int n = static_cast<int>(y.size());
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);

  double h = opts.initial_step != 0.0 ? std::abs(opts.initial_step) : std::abs(span) / 100.0;
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  double t = t0;
  if (on_sample) on_sample(t, y);
  f(t, y, k1);
  long steps = 0;

  std::size_t stop_idx = 0;
  while (stop_idx < stops.size() && dir * (stops[stop_idx] - t) <= 1e-14 * std::abs(span)) {
    ++stop_idx;
  }

  while (stop_idx < stops.size()) {
    const double target = stops[stop_idx];
    bool hit_target = false;
    double h_try = std::min(h, std::abs(target - t));
    if (dir * (target - t) <= 0.0) hit_target = true;

    while (!hit_target) {
      if (++steps > opts.max_steps) throw NumericalError("ODE integrator exceeded max steps");
      if (h_try >= std::abs(target - t) * (1.0 - 1e-14)) {
        h_try = std::abs(target - t);
        hit_target = true;
      }
      const double hs = dir * h_try;

      ytmp = y + hs * a21 * k1;
      f(t + c2 * hs, ytmp, k2);
      ytmp = y + hs * (a31 * k1 + a32 * k2);
      f(t + c3 * hs, ytmp, k3);
      ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      f(t + c4 * hs, ytmp, k4);
      ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      f(t + c5 * hs, ytmp, k5);
      ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      f(t + hs, ytmp, k6);
      ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      f(t + hs, ynew, k7);
      yerr = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        const double scale =
            opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err = std::max(err, std::abs(yerr[i]) / scale);
      }

      if (err <= 1.0) {
        t += hs;
        y.swap(ynew);
        k1.swap(k7);  // FSAL
        if (on_accept) on_accept(t, y);
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = h_try * std::min(5.0, std::max(0.2, grow));
        if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
        if (!hit_target) h_try = h;
      } else {
        hit_target = false;
        h_try *= std::max(0.1, 0.9 * std::pow(err, -0.25));
        if (!(h_try > 1e-15 * std::abs(span)))
          throw NumericalError("ODE step size underflow at t = " + std::to_string(t));
      }
    }

    if (on_sample) on_sample(t, y);
    ++stop_idx;
    while (stop_idx < stops.size() && dir * (stops[stop_idx] - t) <= 1e-14 * std::abs(span)) {
      if (on_sample) on_sample(t, y);
      ++stop_idx;
    }
  }
}

}  // namespace ringlat
