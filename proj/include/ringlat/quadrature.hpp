#pragma once

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "ringlat/errors.hpp"

namespace ringlat {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK values).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, double& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kGK15Nodes[i]);
    fv[14 - i] = f(c + h * kGK15Nodes[i]);
  }
  fv[7] = f(c);
  double kronrod = kGK15WeightsK[7] * fv[7];
  for (int i = 0; i < 7; ++i) kronrod += kGK15WeightsK[i] * (fv[i] + fv[14 - i]);
  double gauss = kGK15WeightsG[3] * fv[7];
  for (int i = 0; i < 3; ++i) gauss += kGK15WeightsG[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  value = kronrod * h;
  error = std::abs((kronrod - gauss) * h);
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]. Splits the interval
// with the largest error estimate until the global estimate meets
// max(abs_tol, rel_tol * |integral|).
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                                    double abs_tol = 0.0, int max_intervals = 5000) {
  QuadratureResult res;
  if (a == b) return res;

  std::priority_queue<detail::Interval> heap;
  detail::Interval first{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, first.value, first.error);
  res.evaluations = 15;
  double total_value = first.value;
  double total_error = first.error;
  heap.push(first);

  int n_intervals = 1;
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
    if (n_intervals >= max_intervals) {
      throw NumericalError("adaptive quadrature failed to converge: " +
                           std::to_string(n_intervals) + " intervals, error estimate " +
                           std::to_string(total_error));
    }
    detail::Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw NumericalError("adaptive quadrature interval underflow");
    detail::Interval left{worst.a, mid, 0.0, 0.0};
    detail::Interval right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    res.evaluations += 30;
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n_intervals;
  }

  res.value = total_value;
  res.error = total_error;
  return res;
}

}  // namespace ringlat
