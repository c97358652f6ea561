#include "selfforce/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfforce/regularized.hpp"

namespace selfforce::fdtd {

namespace {

constexpr double kMaxCourant = 0.9;
constexpr double kBoundaryLimit = 1e-12;

struct IndexRange {
  std::size_t lo = 1;
  std::size_t hi = 0;  // inclusive; empty when hi < lo
};

// Interior grid indices within `radius` of y (a superset is fine: the
// truncated density is exactly zero outside).
IndexRange window(const Grid& grid, double y, double radius) {
  const double origin = static_cast<double>(grid.origin);
  const double first = std::floor((y - radius) / grid.dx + origin);
  const double last = std::ceil((y + radius) / grid.dx + origin);
  const double top = static_cast<double>(grid.n) - 2.0;
  IndexRange r;
  if (last < 1.0 || first > top) return r;
  r.lo = static_cast<std::size_t>(std::max(first, 1.0));
  r.hi = static_cast<std::size_t>(std::min(last, top));
  return r;
}

void advance_field(const Grid& grid, FieldState& state, std::vector<double>& next, double y_source,
                   const PhysicalParams& p, double dt) {
  const std::size_t n = grid.n;
  const auto& cur = state.phi_curr;
  const auto& prev = state.phi_prev;
  const double courant = p.c * dt / grid.dx;
  const double c2 = courant * courant;
  next.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    next[j] = 2.0 * cur[j] - prev[j] + c2 * ((cur[j + 1] + cur[j - 1]) - 2.0 * cur[j]);
  }
  const regularized::GaussianSource src(p.sigma, p.beta);
  const auto w = window(grid, y_source, src.radius());
  const double kick = dt * dt * p.beta;
  for (std::size_t j = w.lo; j <= w.hi; ++j) next[j] += kick * src.density(grid.x(j) - y_source);

  state.phi_prev.swap(state.phi_curr);
  state.phi_curr.swap(next);
  ++state.step;
  state.t = static_cast<double>(state.step) * dt;
}

void check_boundaries(const Grid& grid, const FieldState& state) {
  const double left = std::abs(state.phi_curr[1]);
  const double right = std::abs(state.phi_curr[grid.n - 2]);
  if (left >= kBoundaryLimit || right >= kBoundaryLimit) {
    throw Error(ErrorCode::BoundaryContact,
                "field reached the boundary at t = " + std::to_string(state.t) + " (|phi| = " +
                    std::to_string(std::max(left, right)) + ")");
  }
}

void coupled_step_in_place(const Grid& grid, CoupledState& s, std::vector<double>& scratch,
                           const PhysicalParams& p, double dt) {
  const double v_half = s.v + 0.5 * dt * s.force / p.m;
  advance_field(grid, s.field, scratch, s.y, p, dt);
  s.y += dt * v_half;
  s.force = particle_force(grid, s.field, s.y, p);
  s.v = v_half + 0.5 * dt * s.force / p.m;
  if (!(std::abs(s.v) < p.c)) {
    throw Error(ErrorCode::SuperluminalVelocity,
                "|v| = " + std::to_string(std::abs(s.v)) + " >= c at t = " + std::to_string(s.field.t));
  }
}

std::vector<double> centred_gradient(const Grid& grid, const FieldState& state) {
  std::vector<double> g(grid.n, 0.0);
  const auto& phi = state.phi_curr;
  for (std::size_t j = 1; j + 1 < grid.n; ++j) g[j] = (phi[j + 1] - phi[j - 1]) / (2.0 * grid.dx);
  return g;
}

}  // namespace

Grid Grid::causal(const PhysicalParams& p, double horizon, double dx) {
  if (!(dx > 0.0)) throw Error(ErrorCode::InvalidConfig, "dx must be > 0");
  const double reach = p.c * horizon + std::abs(p.v0) * horizon + 8.0 * p.sigma;
  const double margin = 8.0 * p.sigma + 32.0 * dx;
  return symmetric(static_cast<std::size_t>(std::ceil((reach + margin) / dx)), dx);
}

Grid Grid::symmetric(std::size_t half_cells, double dx) {
  if (!(dx > 0.0)) throw Error(ErrorCode::InvalidConfig, "dx must be > 0");
  if (half_cells < 2) throw Error(ErrorCode::InvalidConfig, "grid needs at least two cells per side");
  return Grid{dx, 2 * half_cells + 1, half_cells};
}

void cfl_check(double c, double dx, double dt) {
  if (!(dx > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::InvalidConfig, "dx and dt must be > 0");
  const double courant = c * dt / dx;
  if (courant > kMaxCourant) {
    throw Error(ErrorCode::CflViolation, "Courant number " + std::to_string(courant) + " exceeds 0.9");
  }
}

void resolution_check(double sigma, double dx) {
  if (!(sigma >= 4.0 * dx)) {
    throw Error(ErrorCode::SourceUnderresolved,
                "sigma = " + std::to_string(sigma) + " is below 4 dx = " + std::to_string(4.0 * dx));
  }
}

FieldState initial_field(const Grid& grid, const PhysicalParams& p, double dt, double y0) {
  resolution_check(p.sigma, grid.dx);
  FieldState s;
  s.phi_curr.assign(grid.n, 0.0);
  s.phi_prev.assign(grid.n, 0.0);
  const regularized::GaussianSource src(p.sigma, p.beta);
  const auto w = window(grid, y0, src.radius());
  const double half_kick = 0.5 * dt * dt * p.beta;
  for (std::size_t j = w.lo; j <= w.hi; ++j) s.phi_prev[j] = half_kick * src.density(grid.x(j) - y0);
  return s;
}

FieldState field_step(const Grid& grid, const FieldState& state, double y_source, const PhysicalParams& p,
                      double dt) {
  resolution_check(p.sigma, grid.dx);
  FieldState next = state;
  std::vector<double> scratch;
  advance_field(grid, next, scratch, y_source, p, dt);
  return next;
}

double particle_force(const Grid& grid, const FieldState& state, double y, const PhysicalParams& p) {
  const regularized::GaussianSource src(p.sigma, p.beta);
  const auto w = window(grid, y, src.radius());
  const auto& phi = state.phi_curr;
  double sum = 0.0;
  for (std::size_t j = w.lo; j <= w.hi; ++j) sum += (phi[j + 1] - phi[j - 1]) * src.density(grid.x(j) - y);
  return 0.5 * p.beta * sum;
}

CoupledState coupled_step(const Grid& grid, CoupledState state, const PhysicalParams& p, double dt) {
  resolution_check(p.sigma, grid.dx);
  std::vector<double> scratch;
  coupled_step_in_place(grid, state, scratch, p, dt);
  return state;
}

std::vector<double> field_rate(const Grid& grid, const FieldState& state, double y_source,
                               const PhysicalParams& p, double dt) {
  const std::size_t n = grid.n;
  const auto& cur = state.phi_curr;
  const auto& prev = state.phi_prev;
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
  std::vector<double> rate(n, 0.0);
  // Start-up level: the field is at rest by the initial data, and the
  // formula below only reproduces that up to rounding.
  if (state.step == 0) return rate;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double accel = p.c * p.c * ((cur[j + 1] + cur[j - 1]) - 2.0 * cur[j]) * inv_dx2;
    rate[j] = (cur[j] - prev[j]) / dt + 0.5 * dt * accel;
  }
  const regularized::GaussianSource src(p.sigma, p.beta);
  const auto w = window(grid, y_source, src.radius());
  for (std::size_t j = w.lo; j <= w.hi; ++j) rate[j] += 0.5 * dt * p.beta * src.density(grid.x(j) - y_source);
  return rate;
}

EnergySnapshot discrete_energies(const Grid& grid, const CoupledState& state, const PhysicalParams& p, double dt) {
  const auto& phi = state.field.phi_curr;
  const double dx = grid.dx;
  EnergySnapshot e;
  e.t = state.field.t;
  e.T_p = 0.5 * p.m * state.v * state.v;

  double kinetic = 0.0;
  for (double r : field_rate(grid, state.field, state.y, p, dt)) kinetic += r * r;
  e.T_f = 0.5 * kinetic * dx;

  double strain = 0.0;
  for (std::size_t j = 0; j + 1 < grid.n; ++j) {
    const double g = (phi[j + 1] - phi[j]) / dx;
    strain += g * g;
  }
  e.U_ff = 0.5 * p.c * p.c * strain * dx;

  const regularized::GaussianSource src(p.sigma, p.beta);
  const auto w = window(grid, state.y, src.radius());
  double overlap = 0.0;
  for (std::size_t j = w.lo; j <= w.hi; ++j) overlap += phi[j] * src.density(grid.x(j) - state.y);
  e.U_fp = -p.beta * overlap * dx + 0.0;
  return e;
}

double max_gradient(const Grid& grid, const FieldState& state) {
  double g = 0.0;
  const auto& phi = state.phi_curr;
  for (std::size_t j = 0; j + 1 < grid.n; ++j) g = std::max(g, std::abs(phi[j + 1] - phi[j]) / grid.dx);
  return g;
}

std::size_t step_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
}

RunResult run_coupled(const RunSettings& settings, const PhysicalParams& params, const RunObserver* observer) {
  const PhysicalParams p = validate_params(params);
  if (!(p.sigma > 0.0)) throw Error(ErrorCode::SourceUnderresolved, "the grid solver needs sigma > 0");
  if (!(settings.horizon >= 0.0)) throw Error(ErrorCode::InvalidConfig, "horizon must be >= 0");
  if (settings.stride == 0) throw Error(ErrorCode::InvalidConfig, "output stride must be >= 1");
  cfl_check(p.c, settings.dx, settings.dt);
  resolution_check(p.sigma, settings.dx);

  const double dt = settings.dt;
  const Grid grid = Grid::causal(p, settings.horizon, settings.dx);
  const std::size_t steps = step_count(settings.horizon, dt);
  const double B = gradient_growth_constant(p);

  std::vector<std::size_t> snapshot_steps;
  for (double ts : settings.snapshot_times) {
    const auto k = static_cast<std::size_t>(std::llround(ts / dt));
    if (ts < 0.0 || k > steps) {
      throw Error(ErrorCode::OutOfRange, "snapshot time " + std::to_string(ts) + " outside the run");
    }
    snapshot_steps.push_back(k);
  }

  CoupledState state;
  state.field = initial_field(grid, p, dt, 0.0);
  state.y = 0.0;
  state.v = p.v0;
  state.force = 0.0;

  std::vector<double> times, ys, vs;
  times.reserve(steps + 1);
  ys.reserve(steps + 1);
  vs.reserve(steps + 1);
  EnergyLedger ledger{Provenance::Discrete, {}};
  std::vector<TrajectorySample> samples;
  std::vector<FieldSnapshot> snapshots;
  BoundsReport bounds;
  std::vector<double> scratch;

  for (std::size_t n = 0;; ++n) {
    const double t = state.field.t;
    times.push_back(t);
    ys.push_back(state.y);
    vs.push_back(state.v);

    if (n % settings.stride == 0) {
      const EnergySnapshot e = discrete_energies(grid, state, p, dt);
      const TrajectorySample sample{t, state.y, state.v};
      ledger.samples.push_back(e);
      samples.push_back(sample);
      if (observer && observer->on_sample) observer->on_sample(e, sample);

      if (t > 0.0) {
        const double g = max_gradient(grid, state.field);
        bounds.max_gradient_ratio = std::max(bounds.max_gradient_ratio, g / (B * t));
        if (g > 1.05 * B * t) bounds.gradient_ok = false;
      }
      if (std::abs(state.y) > B / (6.0 * p.m) * t * t * t + std::abs(p.v0) * t + 1e-15) bounds.growth_ok = false;
    }
    if (std::find(snapshot_steps.begin(), snapshot_steps.end(), n) != snapshot_steps.end()) {
      FieldSnapshot snap{t, state.field.phi_curr, centred_gradient(grid, state.field),
                         field_rate(grid, state.field, state.y, p, dt)};
      if (observer && observer->on_snapshot) observer->on_snapshot(snap);
      snapshots.push_back(std::move(snap));
    }
    if (n == steps) break;

    coupled_step_in_place(grid, state, scratch, p, dt);
    check_boundaries(grid, state.field);
  }

  return RunResult{grid,
                   dt,
                   Trajectory(std::move(times), std::move(ys), std::move(vs)),
                   std::move(ledger),
                   std::move(samples),
                   std::move(snapshots),
                   bounds};
}

FieldState run_prescribed(const Grid& grid, const Trajectory& traj, const PhysicalParams& p, double dt,
                          std::size_t steps) {
  resolution_check(p.sigma, grid.dx);
  cfl_check(p.c, grid.dx, dt);
  FieldState state = initial_field(grid, p, dt, traj.position(0.0));
  std::vector<double> scratch;
  for (std::size_t n = 0; n < steps; ++n) {
    advance_field(grid, state, scratch, traj.position(static_cast<double>(n) * dt), p, dt);
    check_boundaries(grid, state);
  }
  return state;
}

}  // namespace selfforce::fdtd
