#include "ringlat/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "ringlat/errors.hpp"

namespace ringlat {

PiecewiseLinearProgram::PiecewiseLinearProgram(std::vector<ProgramSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("program needs at least one segment");
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    if (!(segments_[i].t_start < segments_[i + 1].t_start))
      throw ValidationError("program segments must have increasing start times");
  }
  for (const auto& s : segments_) {
    if (!std::isfinite(s.value) || !std::isfinite(s.slope) || !std::isfinite(s.t_start))
      throw ValidationError("program segment coefficients must be finite");
  }
}

PiecewiseLinearProgram PiecewiseLinearProgram::constant(double value) {
  return PiecewiseLinearProgram({{0.0, value, 0.0}});
}

PiecewiseLinearProgram PiecewiseLinearProgram::linear(double value_at_t0, double slope, double t0) {
  return PiecewiseLinearProgram({{t0, value_at_t0, slope}});
}

const ProgramSegment& PiecewiseLinearProgram::active(double t) const {
  // Last segment with t_start <= t; times before the first segment
  // extrapolate the first piece.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const ProgramSegment& s) { return v < s.t_start; });
  if (it == segments_.begin()) return segments_.front();
  return *(it - 1);
}

double PiecewiseLinearProgram::operator()(double t) const {
  const ProgramSegment& s = active(t);
  return s.value + s.slope * (t - s.t_start);
}

double PiecewiseLinearProgram::derivative(double t) const { return active(t).slope; }

double PiecewiseLinearProgram::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integral(b, a);
  double total = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double lo = std::max(a, i == 0 ? a : segments_[i].t_start);
    const double hi = std::min(b, i + 1 < segments_.size() ? segments_[i + 1].t_start : b);
    if (hi <= lo) continue;
    const ProgramSegment& s = segments_[i];
    const double u0 = lo - s.t_start;
    const double u1 = hi - s.t_start;
    total += s.value * (u1 - u0) + 0.5 * s.slope * (u1 * u1 - u0 * u0);
  }
  return total;
}

double PiecewiseLinearProgram::min_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  double m = std::min((*this)(a), (*this)(b));
  for (const auto& s : segments_) {
    if (s.t_start > a && s.t_start < b) {
      m = std::min(m, (*this)(s.t_start));
      // Value just before the break belongs to the previous piece.
      m = std::min(m, (*this)(std::nextafter(s.t_start, a)));
    }
  }
  return m;
}

double chirp_phase(const DriveSchedule& s, double t) {
  return 0.5 * s.chirp.integral(s.chirp_origin_t0, t);
}

double omega_eff(const DriveSchedule& s, int azimuthal_l, double t) {
  return s.rotation(t) + s.chirp(t) / (2.0 * azimuthal_l);
}

double eta_of_t(const DriveSchedule& s, const RingLatticeParams& p, double t) {
  return -(p.inertia_I / p.hbar) * omega_eff(s, p.azimuthal_l, t);
}

double eta_rate(const DriveSchedule& s, const RingLatticeParams& p, double t) {
  const double domega = s.rotation.derivative(t) + s.chirp.derivative(t) / (2.0 * p.azimuthal_l);
  return -(p.inertia_I / p.hbar) * domega;
}

}  // namespace ringlat
