#pragma once

#include <vector>

#include "ringlat/params.hpp"

namespace ringlat {

// One analytic piece of a time program: value + slope * (t - t_start).
// A constant piece is a linear piece with zero slope.
struct ProgramSegment {
  double t_start = 0.0;
  double value = 0.0;
  double slope = 0.0;
};

// Time program made of ordered constant/linear segments. Keeping the pieces
// linear makes every phase integral exact.
class PiecewiseLinearProgram {
 public:
  PiecewiseLinearProgram() : segments_{{0.0, 0.0, 0.0}} {}
  explicit PiecewiseLinearProgram(std::vector<ProgramSegment> segments);

  static PiecewiseLinearProgram constant(double value);
  static PiecewiseLinearProgram linear(double value_at_t0, double slope, double t0 = 0.0);

  double operator()(double t) const;
  double derivative(double t) const;

  // Exact integral over [a, b]; antisymmetric when a > b.
  double integral(double a, double b) const;

  // Exact minimum over [a, b]; linear pieces attain extrema at endpoints.
  double min_on(double a, double b) const;

  const std::vector<ProgramSegment>& segments() const { return segments_; }

 private:
  const ProgramSegment& active(double t) const;
  std::vector<ProgramSegment> segments_;
};

// Drive programs of the ring lattice: depth V(t), external rotation
// Omega(t) and beam chirp dOmega(t). The chirp phase a(t) positions the
// lattice extrema; the chirp acts as rotation at rate da/dt / l.
struct DriveSchedule {
  PiecewiseLinearProgram depth = PiecewiseLinearProgram::constant(0.0);
  PiecewiseLinearProgram rotation = PiecewiseLinearProgram::constant(0.0);
  PiecewiseLinearProgram chirp = PiecewiseLinearProgram::constant(0.0);
  double chirp_origin_t0 = 0.0;
};

// a(t) = (1/2) Int_{t0}^{t} chirp(t') dt'.
double chirp_phase(const DriveSchedule& s, double t);

// Omega_eff(t) = Omega(t) + chirp(t)/(2l): chirp and physical rotation are
// interchangeable sources of lattice rotation.
double omega_eff(const DriveSchedule& s, int azimuthal_l, double t);

// eta(t) = -(I/hbar) Omega_eff(t): momentum offset picked up by the drive.
double eta_of_t(const DriveSchedule& s, const RingLatticeParams& p, double t);

// s(t) = d eta / dt, analytic for the piecewise-linear programs.
double eta_rate(const DriveSchedule& s, const RingLatticeParams& p, double t);

}  // namespace ringlat
