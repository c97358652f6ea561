#pragma once

// Exact point-source solution. The particle velocity solves the separable
// equation m dv/dt = -(beta^2 / 2c) v / (c^2 - v^2), whose implicit solution
//
//     m [ c^2 ln(v0 / v) - (v0^2 - v^2) / 2 ] = (beta^2 / 2c) t
//
// is inverted by bisection. The field is phi = (beta / 2c) tau(x), where
// tau(x) is the emission time of the characteristic through (x, t).

#include <span>

#include "selfforce/core.hpp"

namespace selfforce::analytic {

/// Particle velocity at time t >= 0. Sign of v0 is preserved; v0 = 0 stays 0.
double velocity(const PhysicalParams& p, double t);

/// y(t) = integral of velocity over [0, t] by adaptive Gauss-Kronrod.
double position(const PhysicalParams& p, double t);

/// Point-source solution precomputed on [0, horizon]. The trajectory is
/// sampled every damping_time / 1000 so Hermite interpolation stays well
/// below 1e-10; sigma in the stored params is forced to 0.
class DeltaSolution {
public:
  DeltaSolution(const PhysicalParams& p, double horizon);

  const PhysicalParams& params() const { return params_; }
  double horizon() const { return horizon_; }
  const Trajectory& trajectory() const { return trajectory_; }

private:
  PhysicalParams params_;
  double horizon_;
  Trajectory trajectory_;
};

/// Emission time tau(x) for the field at time t. Zero outside [-ct, ct],
/// equal to t at the particle, continuous everywhere.
double tau_of_x(const DeltaSolution& sol, double x, double t);

double phi(const DeltaSolution& sol, double x, double t);

/// Piecewise gradient: (beta/2c)/(c + v(tau)) left of the particle,
/// -(beta/2c)/(c - v(tau)) right of it, -(beta/2c) v/(c^2 - v^2) exactly at
/// the particle and 0 on and outside the light cone.
double dphi_dx(const DeltaSolution& sol, double x, double t);

/// c * dphi_dx * sign(y(t) - x). Throws UndefinedAtKink at x = y(t), +-ct.
double dphi_dt(const DeltaSolution& sol, double x, double t);

/// Energy constituents at time t. U_fp is exactly -(beta^2/2c) t; U_ff and
/// T_f share one quadrature of (beta^2 c / 4) / (c^2 - v^2) over [0, t].
EnergySnapshot energies(const DeltaSolution& sol, double t);

/// Same constituents at every time in `times` (ascending), integrating the
/// field-energy density cumulatively between consecutive times.
EnergyLedger energy_ledger(const PhysicalParams& p, std::span<const double> times);

}  // namespace selfforce::analytic
