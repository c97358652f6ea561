#pragma once

// Gaussian-regularized source and direct quadrature of the Duhamel
// representation of the field,
//
//   phi(x, t) = (beta / 2c) int_0^t int_{x - c(t-tau)}^{x + c(t-tau)} f(x1 - y(tau)) dx1 dtau,
//
// for an arbitrary prescribed trajectory. This tier is the independent
// oracle for both the point-source formulas and the finite-difference solver.

#include "selfforce/core.hpp"

namespace selfforce::regularized {

/// Normalized Gaussian of width sigma, truncated to exactly zero beyond 8 sigma.
class GaussianSource {
public:
  GaussianSource(double sigma, double beta);

  double sigma() const { return sigma_; }
  double beta() const { return beta_; }
  double radius() const { return 8.0 * sigma_; }
  double peak() const { return norm_; }

  /// delta_sigma(r); 0 for |r| > radius.
  double density(double r) const;

  /// erf(r / (sqrt(2) sigma)) with r clamped to the truncation window, so that
  /// (cdf_term(b) - cdf_term(a)) / 2 is the source mass on [a, b].
  double cdf_term(double r) const;

private:
  double sigma_;
  double beta_;
  double norm_;
};

/// delta_sigma(x - y).
double source_value(const GaussianSource& s, double x, double y);

/// Field value by 1D quadrature over emission time; the inner spatial
/// integral is a difference of Gaussian CDF values. Quadrature tolerance 1e-10.
double phi_duhamel(const Trajectory& traj, const GaussianSource& s, double x, double t, double c);

/// (beta/2c) int_0^t [f(x + c(t-tau) - y) - f(x - c(t-tau) - y)] dtau.
double dphi_dx_duhamel(const Trajectory& traj, const GaussianSource& s, double x, double t, double c);

/// (beta/2) int_0^t [f(x + c(t-tau) - y) + f(x - c(t-tau) - y)] dtau.
double dphi_dt_duhamel(const Trajectory& traj, const GaussianSource& s, double x, double t, double c);

/// Energy constituents of the regularized field at time t by nested
/// quadrature over x, with T_p taken from the prescribed trajectory. The
/// trajectory need not be self-consistent, so H is not conserved in general.
EnergySnapshot quadrature_energies(const Trajectory& traj, const GaussianSource& s,
                                   const PhysicalParams& p, double t);

}  // namespace selfforce::regularized
