#include "selfforce/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "selfforce/analytic.hpp"
#include "selfforce/diagnostics.hpp"
#include "selfforce/fdtd.hpp"
#include "selfforce/format.hpp"
#include "selfforce/output.hpp"
#include "selfforce/regularized.hpp"

namespace selfforce::acceptance {

namespace {

using diagnostics::TimeWindow;

std::string list(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_number(xs[i]);
  return s + "]";
}

// Shared inputs of the point-source criteria: a time grid reaching at least
// ten damping times at the configured output spacing.
struct AnalyticSetup {
  PhysicalParams p;
  double td = 0.0;
  double horizon = 0.0;
  std::vector<double> times;
};

AnalyticSetup analytic_setup(const config::RunConfig& cfg) {
  AnalyticSetup s;
  s.p = cfg.physics;
  s.p.sigma = 0.0;
  s.td = damping_time(s.p);
  s.horizon = std::max(cfg.numerics.T, 10.0 * s.td);
  const double h = cfg.time_step() * static_cast<double>(cfg.numerics.stride);
  const std::size_t n = fdtd::step_count(s.horizon, h);
  s.times.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) s.times.push_back(static_cast<double>(k) * h);
  return s;
}

TimeWindow late_window(const AnalyticSetup& s) { return {5.0 * s.td, 10.0 * s.td}; }

Criterion a1_damping(const AnalyticSetup& s) {
  Criterion c{"A1", "velocity damping law", 0.0, 0.01, false, "", 0.0};
  const auto& p = s.p;
  if (p.v0 == 0.0) {
    c.detail = "v0 = 0: the particle never moves, nothing to damp";
    return c;
  }
  bool decreasing = true;
  double prev = std::abs(p.v0);
  std::vector<double> ts, logs;
  const auto w = late_window(s);
  for (double t : s.times) {
    const double v = std::abs(analytic::velocity(p, t));
    if (t > 0.0 && !(v < prev)) decreasing = false;
    prev = v;
    if (t >= w.lo * (1.0 - 1e-12) && t <= w.hi * (1.0 + 1e-12)) {
      ts.push_back(t);
      logs.push_back(std::log(v));
    }
  }
  if (ts.size() < 20) {
    throw Error(ErrorCode::InsufficientSamples,
                std::to_string(ts.size()) + " samples in the decay-rate window, need at least 20");
  }
  const double ratio = std::abs(analytic::velocity(p, 10.0 * s.td)) / std::abs(p.v0);
  const double ratio_limit = 1.1 * std::exp(-10.0);
  const auto fit = diagnostics::fit_line(ts, logs);
  const double rate = -fit.slope;
  const double theory = p.beta * p.beta / (2.0 * p.m * p.c * p.c * p.c);
  c.measured = std::abs(rate - theory) / theory;
  c.pass = decreasing && ratio < ratio_limit && c.measured <= c.tolerance;
  c.detail = "decay rate " + format_number(rate) + " vs " + format_number(theory) + " over [" +
             format_number(w.lo) + ", " + format_number(w.hi) + "]; v(10 t_d)/v0 = " + format_number(ratio) +
             " (limit " + format_number(ratio_limit) + "); strictly decreasing: " + (decreasing ? "yes" : "no");
  return c;
}

Criterion a2_interaction(const AnalyticSetup& s, const EnergyLedger& ledger) {
  Criterion c{"A2", "interaction energy is exactly linear", 0.0, 1e-12, false, "", 0.0};
  const double slope = -s.p.beta * s.p.beta / (2.0 * s.p.c);
  for (const auto& e : ledger.samples) c.measured = std::max(c.measured, std::abs(e.U_fp - slope * e.t));
  c.pass = c.measured <= c.tolerance;
  c.detail = "max |U_fp + beta^2 t / 2c| over " + std::to_string(ledger.samples.size()) + " output times";
  return c;
}

Criterion a3_field_slope(const AnalyticSetup& s, const EnergyLedger& ledger) {
  Criterion c{"A3", "field self-energy slope", 0.0, 0.01, false, "", 0.0};
  const auto fit = diagnostics::fit_linear_asymptote(ledger, Quantity::U_ff, late_window(s), s.p);
  const double gap = diagnostics::tf_uff_gap(ledger);
  c.measured = fit.relative_error;
  c.pass = fit.relative_error <= c.tolerance && gap <= 1e-12;
  c.detail = "slope " + format_number(fit.fit.slope) + " vs " + format_number(fit.theoretical_slope) +
             ", residual norm " + format_number(fit.fit.residual_norm) + " on " + std::to_string(fit.fit.samples) +
             " samples; max |T_f - U_ff| = " + format_number(gap) + " (limit 1e-12)";
  return c;
}

Criterion a4_conservation(const AnalyticSetup& s) {
  Criterion c{"A4", "energy conservation, point source", 0.0, 1e-9, false, "", 0.0};
  const analytic::DeltaSolution sol(s.p, s.horizon);
  const double h0 = 0.5 * s.p.m * s.p.v0 * s.p.v0;
  const double scale = std::max(h0, s.p.m * s.p.c * s.p.c * 1e-12);
  double worst_abs = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = s.horizon * k / 99.0;
    worst_abs = std::max(worst_abs, std::abs(analytic::energies(sol, t).H() - h0));
  }
  c.measured = worst_abs / scale;
  c.pass = c.measured <= c.tolerance;
  c.detail = "max |H - m v0^2/2| = " + format_number(worst_abs) + " at 100 times on [0, " +
             format_number(s.horizon) + "]";
  return c;
}

Criterion a5_grid_bounds(const config::RunConfig& cfg) {
  Criterion c{"A5", "grid solver bounds and energy drift", 0.0, 1e-3, false, "", 0.0};
  const auto& p = cfg.physics;
  fdtd::RunSettings settings;
  settings.dx = *cfg.numerics.dx;
  settings.dt = cfg.time_step();
  settings.horizon = cfg.numerics.T;
  settings.stride = cfg.numerics.stride;
  const auto run = fdtd::run_coupled(settings, p);
  std::string drift;
  if (p.v0 == 0.0) {
    // H(0) = 0: compare against the size of the terms that must cancel.
    c.tolerance = 1e-6 * p.beta * p.beta / (2.0 * p.c) * cfg.numerics.T;
    c.measured = diagnostics::energy_drift(run.ledger);
    drift = "absolute";
  } else {
    c.measured = diagnostics::energy_residual(run.ledger, p);
    drift = "relative";
  }
  c.pass = c.measured < c.tolerance && run.bounds.gradient_ok && run.bounds.growth_ok;
  c.detail = drift + " H drift over " + std::to_string(run.ledger.samples.size()) +
             " samples; max gradient / (B t) = " + format_number(run.bounds.max_gradient_ratio) +
             " (limit 1.05); growth bound held: " + (run.bounds.growth_ok ? "yes" : "no") + "; grid n = " +
             std::to_string(run.grid.n) + ", dt = " + format_number(run.dt);
  return c;
}

double worst_gradient_error(const analytic::DeltaSolution& sol, double sigma, double t,
                            std::span<const double> probes) {
  const regularized::GaussianSource src(sigma, sol.params().beta);
  double worst = 0.0;
  for (double x : probes) {
    const double exact = analytic::dphi_dx(sol, x, t);
    const double reg = regularized::dphi_dx_duhamel(sol.trajectory(), src, x, t, sol.params().c);
    worst = std::max(worst, std::abs(reg - exact) / std::abs(exact));
  }
  return worst;
}

Criterion a6_regularized_gradient(const AnalyticSetup& s) {
  Criterion c{"A6", "regularized gradient matches the point-source field", 0.0, 2e-2, false, "", 0.0};
  const double t = 5.0;
  const double sigma = 0.005;
  const analytic::DeltaSolution sol(s.p, t);
  const double ct = s.p.c * t;
  const double y = sol.trajectory().position(t);
  const double gap = 10.0 * sigma;

  // 25 points strictly inside each smooth piece, clear of the kinks.
  std::vector<double> probes;
  for (auto [lo, hi] : {std::pair{-ct + gap, y - gap}, std::pair{y + gap, ct - gap}}) {
    for (int i = 0; i < 25; ++i) probes.push_back(lo + (hi - lo) * (i + 0.5) / 25.0);
  }
  const double coarse = worst_gradient_error(sol, sigma, t, probes);
  const double fine = worst_gradient_error(sol, 0.5 * sigma, t, probes);
  const double order = std::log2(coarse / fine);
  c.measured = coarse;
  c.pass = coarse <= c.tolerance && fine <= 0.5 * coarse;
  c.detail = "worst relative error " + format_number(coarse) + " at sigma = " + format_number(sigma) + ", " +
             format_number(fine) + " at sigma/2 (must at least halve); observed order in sigma " +
             format_number(order);
  return c;
}

Criterion a7_sigma_limit(const config::RunConfig& cfg) {
  Criterion c{"A7", "trajectory converges as sigma -> 0", 0.0, 5e-3 * cfg.physics.c, false, "", 0.0};
  const std::vector<double> ladder{0.08, 0.04, 0.02};
  const double courant = cfg.physics.c * cfg.time_step() / *cfg.numerics.dx;
  const auto report = diagnostics::sigma_convergence(cfg.physics, ladder, cfg.numerics.T, {}, courant);
  c.measured = report.errors.back();
  c.pass = report.monotone() && c.measured < c.tolerance;
  // Not part of the verdict: the error left at t = T, after the start-up
  // transient has been damped away with the velocity.
  const std::vector<double> end{cfg.numerics.T};
  const auto at_end = diagnostics::sigma_convergence(cfg.physics, ladder, cfg.numerics.T, end, courant);
  c.detail = "max |v - v_exact| per sigma " + list(report.errors) + ", rms " + list(report.rms_errors) +
             ", orders " + list(report.orders) + "; strictly decreasing: " + (report.monotone() ? "yes" : "no") +
             "; error at t = T only " + list(at_end.errors);
  return c;
}

Criterion a8_solver_order(const config::RunConfig& cfg) {
  Criterion c{"A8", "grid solver order against quadrature", 0.0, 0.2, false, "", 0.0};
  PhysicalParams p = cfg.physics;
  p.sigma = 0.08;
  const double horizon = 2.0;
  const double courant = cfg.physics.c * cfg.time_step() / *cfg.numerics.dx;
  const analytic::DeltaSolution sol(p, horizon);
  const regularized::GaussianSource src(p.sigma, p.beta);

  const std::vector<double> ladder{0.016, 0.008, 0.004};
  const double reach = p.c * horizon + std::abs(p.v0) * horizon + 16.0 * p.sigma + 32.0 * ladder.front();
  const auto half = static_cast<std::size_t>(std::ceil(reach / ladder.front()));

  // Nested grids: coarse point j is fine point j * 2^k, so errors are taken
  // at the same x on every rung.
  diagnostics::ConvergenceReport report;
  report.parameter = "dx";
  report.oracle = "regularized field by quadrature along the point-source trajectory";
  report.ladder = ladder;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const std::size_t refine = std::size_t{1} << k;
    const auto grid = fdtd::Grid::symmetric(half * refine, ladder[k]);
    const double dt = courant * ladder[k] / p.c;
    const std::size_t steps = fdtd::step_count(horizon, dt);
    const double t = static_cast<double>(steps) * dt;
    const auto state = fdtd::run_prescribed(grid, sol.trajectory(), p, dt, steps);
    double worst = 0.0, ss = 0.0;
    for (std::size_t j = 0; j <= 2 * half; ++j) {
      const std::size_t jj = j * refine;
      const double ref = regularized::phi_duhamel(sol.trajectory(), src, grid.x(jj), t, p.c);
      const double e = std::abs(state.phi_curr[jj] - ref);
      worst = std::max(worst, e);
      ss += e * e;
    }
    report.errors.push_back(worst);
    report.rms_errors.push_back(std::sqrt(ss / static_cast<double>(2 * half + 1)));
  }
  diagnostics::compute_orders(report);
  c.measured = report.final_order();
  c.pass = std::abs(c.measured - 2.0) <= c.tolerance;
  c.detail = "order from the last pair, must lie in [1.8, 2.2]; max errors " + list(report.errors) + ", orders " +
             list(report.orders);
  return c;
}

}  // namespace

bool Report::all_pass() const {
  return !criteria.empty() && std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

config::RunConfig reference_config() {
  config::RunConfig cfg;
  cfg.mode = config::Mode::Verify;
  cfg.physics = PhysicalParams{1.0, 1.0, 1.0, 0.5, 0.02};
  cfg.numerics.dx = 0.004;
  cfg.numerics.courant = 0.5;
  cfg.numerics.T = 10.0;
  cfg.numerics.stride = 10;
  return cfg;
}

Report run_acceptance(const config::RunConfig& cfg, const std::function<void(const Criterion&)>& on_result) {
  const PhysicalParams p = validate_params(cfg.physics);
  if (!cfg.numerics.dx) throw Error(ErrorCode::MissingKey, "verification needs numerics.dx");
  fdtd::cfl_check(p.c, *cfg.numerics.dx, cfg.time_step());
  fdtd::resolution_check(p.sigma, *cfg.numerics.dx);

  const AnalyticSetup setup = analytic_setup(cfg);
  EnergyLedger ledger;
  bool have_ledger = false;
  auto analytic_ledger = [&]() -> const EnergyLedger& {
    if (!have_ledger) {
      ledger = analytic::energy_ledger(setup.p, setup.times);
      have_ledger = true;
    }
    return ledger;
  };

  const std::vector<std::pair<std::string, std::function<Criterion()>>> suite{
      {"A1", [&] { return a1_damping(setup); }},
      {"A2", [&] { return a2_interaction(setup, analytic_ledger()); }},
      {"A3", [&] { return a3_field_slope(setup, analytic_ledger()); }},
      {"A4", [&] { return a4_conservation(setup); }},
      {"A5", [&] { return a5_grid_bounds(cfg); }},
      {"A6", [&] { return a6_regularized_gradient(setup); }},
      {"A7", [&] { return a7_sigma_limit(cfg); }},
      {"A8", [&] { return a8_solver_order(cfg); }},
  };

  Report report;
  for (const auto& [id, run] : suite) {
    const auto start = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = run();
    } catch (const Error& e) {
      throw Error(e.code(), id + ": " + e.message());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(c);
    report.criteria.push_back(std::move(c));
  }
  return report;
}

std::string summary_line(const Criterion& c) {
  std::ostringstream line;
  line << c.criterion_id << ' ' << (c.pass ? "PASS" : "FAIL") << " measured=" << format_number(c.measured)
       << " tolerance=" << format_number(c.tolerance) << " (" << c.title << "; " << c.detail << ")";
  return line.str();
}

nlohmann::json to_json(const Criterion& c) {
  return {{"criterion_id", c.criterion_id}, {"title", c.title}, {"measured", c.measured},
          {"tolerance", c.tolerance},       {"pass", c.pass},   {"detail", c.detail}};
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json doc;
  doc["format_version"] = output::kFormatVersion;
  doc["all_pass"] = r.all_pass();
  doc["criteria"] = nlohmann::json::array();
  for (const auto& c : r.criteria) doc["criteria"].push_back(to_json(c));
  return doc;
}

}  // namespace selfforce::acceptance
