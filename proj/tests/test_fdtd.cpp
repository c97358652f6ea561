#include <doctest.h>

#include <cmath>
#include <vector>

#include "selfforce/analytic.hpp"
#include "selfforce/diagnostics.hpp"
#include "selfforce/fdtd.hpp"
#include "selfforce/regularized.hpp"
#include "support.hpp"

using namespace selfforce;
using namespace selfforce::fdtd;

namespace {

RunSettings settings(double dx, double courant, double T, std::size_t stride = 1) {
  RunSettings s;
  s.dx = dx;
  s.dt = courant * dx;
  s.horizon = T;
  s.stride = stride;
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("CFL check accepts Courant numbers up to 0.9") {
  CHECK_NOTHROW(cfl_check(1.0, 0.01, 0.005));
  CHECK_NOTHROW(cfl_check(1.0, 0.01, 0.009));
  CHECK(error_code([] { cfl_check(1.0, 0.01, 0.0095); }) == ErrorCode::CflViolation);
  CHECK(error_code([] { cfl_check(2.0, 0.01, 0.005); }) == ErrorCode::CflViolation);
  CHECK(error_code([] { cfl_check(1.0, 0.0, 0.005); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("source must span at least four cells") {
  CHECK_NOTHROW(resolution_check(0.04, 0.01));
  CHECK(error_code([] { resolution_check(0.039, 0.01); }) == ErrorCode::SourceUnderresolved);
}

TEST_CASE("causal grid is symmetric and reaches past the light cone") {
  const PhysicalParams p{1, 1, 1, 0.5, 0.02};
  const Grid g = Grid::causal(p, 3.0, 0.01);
  CHECK(g.n == 2 * g.origin + 1);
  CHECK(g.x(g.origin) == 0.0);
  for (std::size_t j = 0; j < g.n; ++j) CHECK(g.x(j) == -g.x(g.n - 1 - j));
  CHECK(g.x_max() >= 3.0 + 1.5 + 0.16);
}

TEST_CASE("negligible coupling leaves the field at rounding level") {
  const PhysicalParams p{1, 1, 1e-300, 0, 0.05};
  const Grid g = Grid::symmetric(200, 0.01);
  FieldState s = initial_field(g, p, 0.005, 0.0);
  for (int n = 0; n < 50; ++n) s = field_step(g, s, 0.0, p, 0.005);
  CHECK(max_abs(s.phi_curr) < 1e-290);
  CHECK(s.step == 50);
  CHECK(s.t == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("first step matches the Duhamel field of a resting source") {
  // Start-up sets phi at step -1 to half a kick, so step 1 holds (dt^2/2) beta rho.
  const PhysicalParams p{1, 1, 1, 0, 0.05};
  const double dx = 0.005, dt = 0.0025;
  const Grid g = Grid::symmetric(200, dx);
  const FieldState s = field_step(g, initial_field(g, p, dt, 0.0), 0.0, p, dt);
  const analytic::DeltaSolution sol(p, 1.0);
  const regularized::GaussianSource src(p.sigma, p.beta);
  const double peak = 0.5 * dt * dt * src.peak();
  for (std::size_t j = 1; j + 1 < g.n; j += 7) {
    const double ref = regularized::phi_duhamel(sol.trajectory(), src, g.x(j), dt, p.c);
    CHECK(std::abs(s.phi_curr[j] - ref) < 1e-3 * peak);
  }
}

TEST_CASE("shifting the source by whole cells shifts the field by the same cells") {
  const PhysicalParams p{1, 1, 1, 0, 0.05};
  const double dx = 1.0 / 256, dt = 0.5 * dx;
  const Grid g = Grid::symmetric(400, dx);
  FieldState a = initial_field(g, p, dt, 0.0);
  FieldState b = initial_field(g, p, dt, 3 * dx);
  for (int n = 0; n < 40; ++n) {
    a = field_step(g, a, 0.0, p, dt);
    b = field_step(g, b, 3 * dx, p, dt);
  }
  for (std::size_t j = 0; j + 3 < g.n; ++j) CHECK(b.phi_curr[j + 3] == a.phi_curr[j]);
}

TEST_CASE("a resting source feels no net force") {
  const PhysicalParams p{1, 1, 1, 0, 0.05};
  const double dx = 0.01, dt = 0.005;
  const Grid g = Grid::symmetric(300, dx);
  FieldState s = initial_field(g, p, dt, 0.0);
  for (int n = 0; n < 200; ++n) s = field_step(g, s, 0.0, p, dt);
  CHECK(std::abs(particle_force(g, s, 0.0, p)) < 1e-14);
}

TEST_CASE("force on a narrowing source approaches the point-particle self-force") {
  const PhysicalParams base{1, 1, 1, 0.5, 0};
  const double t = 3.0;
  const analytic::DeltaSolution sol(base, t);
  const double y = analytic::position(base, t);
  const double v = analytic::velocity(base, t);
  const double exact = -0.5 * v / (1 - v * v);
  double prev = INFINITY;
  for (double sigma : {0.04, 0.02, 0.01}) {
    PhysicalParams p = base;
    p.sigma = sigma;
    const double dx = sigma / 10;
    const regularized::GaussianSource src(sigma, 1.0);
    // Place a grid so that y sits on a node, then fill the source window.
    const auto half = static_cast<std::size_t>(std::ceil((std::abs(y) + 1.0) / dx));
    const Grid g = Grid::symmetric(half, dx);
    FieldState s;
    s.phi_curr.assign(g.n, 0.0);
    s.phi_prev = s.phi_curr;
    for (std::size_t j = 0; j < g.n; ++j) {
      if (std::abs(g.x(j) - y) <= src.radius() + 2 * dx) {
        s.phi_curr[j] = regularized::phi_duhamel(sol.trajectory(), src, g.x(j), t, 1.0);
      }
    }
    const double err = std::abs(particle_force(g, s, y, p) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05 * std::abs(exact));
}

TEST_CASE("coupled step refuses to leave the light cone") {
  const PhysicalParams p{1, 1, 1, 0.99, 0.05};
  const double dx = 0.01, dt = 0.005;
  const Grid g = Grid::symmetric(100, dx);
  CoupledState s;
  s.field = initial_field(g, p, dt, 0.0);
  s.v = 0.99;
  // A steep external ramp pushes the particle forward.
  for (std::size_t j = 0; j < g.n; ++j) s.field.phi_curr[j] = s.field.phi_prev[j] = 1e6 * g.x(j);
  s.force = particle_force(g, s.field, 0.0, p);
  CHECK(error_code([&] { coupled_step(g, s, p, dt); }) == ErrorCode::SuperluminalVelocity);
}

TEST_CASE("discrete energies at the start") {
  const PhysicalParams p{2, 1, 1, 0.5, 0.05};
  const Grid g = Grid::symmetric(100, 0.01);
  CoupledState s;
  s.field = initial_field(g, p, 0.005, 0.0);
  s.v = p.v0;
  const auto e = discrete_energies(g, s, p, 0.005);
  CHECK(e.T_p == 0.25);
  CHECK(e.T_f == 0.0);
  CHECK(e.U_ff == 0.0);
  CHECK(e.U_fp == 0.0);
  CHECK(e.H() == 0.25);
}

TEST_CASE("a particle at rest stays exactly at the origin") {
  const double T = 10.0;
  const auto r = run_coupled(settings(0.004, 0.5, T, 10), {1, 1, 1, 0, 0.02});
  for (double y : r.trajectory.positions()) CHECK(std::abs(y) < 1e-15);
  for (double v : r.trajectory.velocities()) CHECK(std::abs(v) < 1e-15);
  // H(0) = 0 here, so the drift is judged against the size of U_fp.
  CHECK(diagnostics::energy_drift(r.ledger) < 1e-6 * 0.5 * T);
}

TEST_CASE("static source builds U_fp at the point-particle rate") {
  const auto r = run_coupled(settings(0.005, 0.5, 10.0), {1, 1, 1, 0, 0.02});
  std::vector<double> t, u;
  for (const auto& e : r.ledger.samples) {
    if (e.t >= 5.0) {
      t.push_back(e.t);
      u.push_back(e.U_fp);
    }
  }
  CHECK(diagnostics::fit_line(t, u).slope == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("weak coupling barely changes the velocity") {
  const double T = 2.0;
  const auto r = run_coupled(settings(0.01, 0.5, T), {1, 1, 1e-8, 0.5, 0.05});
  for (double v : r.trajectory.velocities()) CHECK(std::abs(v - 0.5) < 1e-8 * T);
}

TEST_CASE("coupled run conserves the discrete energy") {
  const auto r = run_coupled(settings(0.005, 0.5, 5.0, 10), {1, 1, 1, 0.5, 0.02});
  const double H0 = r.ledger.samples.front().H();
  CHECK(H0 == 0.125);
  CHECK(diagnostics::energy_drift(r.ledger) / H0 < 1e-3);
  CHECK(r.bounds.gradient_ok);
  CHECK(r.bounds.growth_ok);
  CHECK(r.bounds.max_gradient_ratio <= 1.05);
}

TEST_CASE("energy drift shrinks under grid refinement") {
  const PhysicalParams p{1, 1, 1, 0.5, 0.04};
  const double coarse = diagnostics::energy_drift(run_coupled(settings(0.01, 0.5, 3.0), p).ledger);
  const double fine = diagnostics::energy_drift(run_coupled(settings(0.005, 0.5, 3.0), p).ledger);
  CHECK(fine < coarse / 2);
}

TEST_CASE("coupled velocity tracks the point-particle solution to within sigma") {
  const PhysicalParams p{1, 1, 1, 0.5, 0.02};
  const auto r = run_coupled(settings(0.004, 0.5, 5.0), p);
  CHECK(std::abs(r.trajectory.velocity(5.0) - analytic::velocity(p, 5.0)) < p.sigma);
}

TEST_CASE("coupled velocity is second-order accurate in the grid spacing") {
  const PhysicalParams p{1, 1, 1, 0.5, 0.08};
  const double T = 2.0;
  double v[3];
  const double dxs[3] = {0.016, 0.008, 0.004};
  for (int k = 0; k < 3; ++k) v[k] = run_coupled(settings(dxs[k], 0.5, T), p).trajectory.velocity(T);
  const double order = std::log2(std::abs(v[0] - v[1]) / std::abs(v[1] - v[2]));
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("runs are bit-for-bit reproducible") {
  const PhysicalParams p{1, 1, 1, 0.7, 0.03};
  const auto a = run_coupled(settings(0.0075, 0.5, 2.0, 3), p);
  const auto b = run_coupled(settings(0.0075, 0.5, 2.0, 3), p);
  REQUIRE(a.ledger.samples.size() == b.ledger.samples.size());
  for (std::size_t i = 0; i < a.ledger.samples.size(); ++i) {
    CHECK(a.ledger.samples[i].H() == b.ledger.samples[i].H());
    CHECK(a.samples[i].y == b.samples[i].y);
    CHECK(a.samples[i].v == b.samples[i].v);
  }
}

TEST_CASE("zero horizon yields the initial sample only") {
  const auto r = run_coupled(settings(0.01, 0.5, 0.0), {1, 1, 1, 0.5, 0.05});
  CHECK(r.samples.size() == 1);
  CHECK(r.ledger.samples.front().H() == 0.125);
}

TEST_CASE("sample count follows the stride") {
  const auto r = run_coupled(settings(0.01, 0.5, 2.0, 7), {1, 1, 1, 0.5, 0.05});
  CHECK(step_count(2.0, 0.005) == 400);
  CHECK(r.samples.size() == 400 / 7 + 1);
  CHECK(r.trajectory.times().size() == 401);
}

TEST_CASE("observer sees every sample and snapshot") {
  RunSettings s = settings(0.01, 0.5, 1.0, 20);
  s.snapshot_times = {0.0, 0.5, 1.0};
  std::size_t samples = 0;
  std::vector<double> snap_times;
  RunObserver obs;
  obs.on_sample = [&](const EnergySnapshot&, const TrajectorySample&) { ++samples; };
  obs.on_snapshot = [&](const FieldSnapshot& f) { snap_times.push_back(f.t); };
  const auto r = run_coupled(s, {1, 1, 1, 0.5, 0.05}, &obs);
  CHECK(samples == r.samples.size());
  REQUIRE(snap_times.size() == 3);
  CHECK(snap_times[1] == doctest::Approx(0.5));
  CHECK(max_abs(r.snapshots[0].dphi_dt) == 0.0);
  s.snapshot_times = {1.5};
  CHECK(error_code([&] { run_coupled(s, {1, 1, 1, 0.5, 0.05}); }) == ErrorCode::OutOfRange);
}

TEST_CASE("run rejects bad settings before stepping") {
  CHECK(error_code([] { run_coupled(settings(0.01, 0.95, 1.0), {1, 1, 1, 0.5, 0.05}); }) == ErrorCode::CflViolation);
  CHECK(error_code([] { run_coupled(settings(0.01, 0.5, 1.0), {1, 1, 1, 0.5, 0.03}); }) ==
        ErrorCode::SourceUnderresolved);
  CHECK(error_code([] { run_coupled(settings(0.01, 0.5, 1.0), {1, 1, 1, 1.2, 0.05}); }) ==
        ErrorCode::SuperluminalInitialVelocity);
}

TEST_CASE("prescribed run on a short grid hits the boundary") {
  const PhysicalParams p{1, 1, 1, 0, 0.05};
  const Trajectory rest({0.0, 10.0}, {0.0, 0.0}, {0.0, 0.0});
  const Grid g = Grid::symmetric(100, 0.01);
  CHECK(error_code([&] { run_prescribed(g, rest, p, 0.005, 400); }) == ErrorCode::BoundaryContact);
  CHECK_NOTHROW(run_prescribed(g, rest, p, 0.005, 50));
}

TEST_CASE("prescribed rest trajectory matches the coupled rest run") {
  const PhysicalParams p{1, 1, 1, 0, 0.05};
  const auto r = run_coupled(settings(0.01, 0.5, 1.0), p);
  const Trajectory rest({0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0});
  const auto s = run_prescribed(r.grid, rest, p, 0.005, 200);
  const auto coupled_again = run_coupled([] {
    RunSettings st = settings(0.01, 0.5, 1.0);
    st.snapshot_times = {1.0};
    return st;
  }(), p);
  CHECK(s.phi_curr == coupled_again.snapshots.front().phi);
}
