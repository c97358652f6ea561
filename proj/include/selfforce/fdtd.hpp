#pragma once

// Explicit leapfrog solver for the coupled field/particle system with a
// Gaussian source of width sigma:
//
//   phi_tt = c^2 phi_xx + beta f(x - y(t)),
//   m y''  = beta d/dy int phi(x) f(x - y) dx.
//
// The field uses the three-level stencil with zero Dirichlet boundaries on a
// domain sized so no signal reaches them; the particle uses a kick-drift-kick
// update around each field step.

#include <cstddef>
#include <functional>
#include <vector>

#include "selfforce/core.hpp"

namespace selfforce::fdtd {

/// Uniform grid x_j = (j - origin) dx, j = 0..n-1. Grids built by `causal`
/// are symmetric about x = 0 to the bit.
struct Grid {
  double dx = 0.0;
  std::size_t n = 0;
  std::size_t origin = 0;

  double x(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(origin)) * dx; }
  double x_min() const { return x(0); }
  double x_max() const { return x(n - 1); }

  /// Symmetric grid reaching at least c T + |v0| T + 8 sigma (plus a margin of
  /// a few source widths) on both sides.
  static Grid causal(const PhysicalParams& p, double horizon, double dx);

  /// Symmetric grid with `half_cells` cells on each side of x = 0.
  static Grid symmetric(std::size_t half_cells, double dx);
};

struct FieldState {
  std::vector<double> phi_prev;
  std::vector<double> phi_curr;
  double t = 0.0;
  std::size_t step = 0;
};

struct CoupledState {
  FieldState field;
  double y = 0.0;
  double v = 0.0;
  /// Force from the current field at the current position, reused as the
  /// first half-kick of the next step.
  double force = 0.0;
};

/// Throws CflViolation unless c dt / dx <= 0.9.
void cfl_check(double c, double dx, double dt);

/// Throws SourceUnderresolved unless sigma >= 4 dx.
void resolution_check(double sigma, double dx);

/// Field at rest with the second-order start-up level
/// phi^{-1}_j = (dt^2 / 2) beta f(x_j - y0).
FieldState initial_field(const Grid& grid, const PhysicalParams& p, double dt, double y0);

/// One leapfrog step; `y_source` is the particle position at the centre of the
/// three-level stencil (the current time level).
FieldState field_step(const Grid& grid, const FieldState& state, double y_source, const PhysicalParams& p,
                      double dt);

/// beta sum_j (dphi/dx)_j f(x_j - y) dx with centred differences.
double particle_force(const Grid& grid, const FieldState& state, double y, const PhysicalParams& p);

/// Half-kick, field step, drift, half-kick. Throws SuperluminalVelocity if the
/// new |v| >= c.
CoupledState coupled_step(const Grid& grid, CoupledState state, const PhysicalParams& p, double dt);

/// Time derivative of the field at the current level, centred:
/// (phi^{n+1} - phi^{n-1}) / 2dt written through the update rule; exactly
/// zero at step 0, where the field starts at rest.
std::vector<double> field_rate(const Grid& grid, const FieldState& state, double y_source,
                               const PhysicalParams& p, double dt);

/// Discrete energy constituents at the current time level.
EnergySnapshot discrete_energies(const Grid& grid, const CoupledState& state, const PhysicalParams& p, double dt);

/// Largest |phi_{j+1} - phi_j| / dx over the grid.
double max_gradient(const Grid& grid, const FieldState& state);

struct RunSettings {
  double dx = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  std::size_t stride = 1;
  std::vector<double> snapshot_times;
};

struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> phi;
  std::vector<double> dphi_dx;
  std::vector<double> dphi_dt;
};

struct TrajectorySample {
  double t = 0.0;
  double y = 0.0;
  double v = 0.0;
};

/// A priori growth bounds observed over a run: the field gradient against
/// B t and the particle excursion against (B / 6m) t^3 + |v0| t.
struct BoundsReport {
  double max_gradient_ratio = 0.0;  // max over t > 0 of max|dphi/dx| / (B t)
  bool gradient_ok = true;          // gradient <= 1.05 B t at every output time
  bool growth_ok = true;
};

/// Receives output as it is produced, so a run that aborts still leaves
/// everything up to the failure with the caller.
struct RunObserver {
  std::function<void(const EnergySnapshot&, const TrajectorySample&)> on_sample;
  std::function<void(const FieldSnapshot&)> on_snapshot;
};

struct RunResult {
  Grid grid;
  double dt = 0.0;
  Trajectory trajectory;
  EnergyLedger ledger;
  std::vector<TrajectorySample> samples;
  std::vector<FieldSnapshot> snapshots;
  BoundsReport bounds;
};

/// Number of whole steps of size dt that fit in the horizon.
std::size_t step_count(double horizon, double dt);

/// Full coupled run. Deterministic: identical inputs give bit-identical output.
RunResult run_coupled(const RunSettings& settings, const PhysicalParams& p, const RunObserver* observer = nullptr);

/// Field driven by a prescribed trajectory (no back-reaction) for `steps`
/// steps; used to measure the wave solver's order against quadrature.
FieldState run_prescribed(const Grid& grid, const Trajectory& traj, const PhysicalParams& p, double dt,
                          std::size_t steps);

}  // namespace selfforce::fdtd
