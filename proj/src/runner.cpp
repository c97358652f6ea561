#include "selfforce/runner.hpp"

#include <cmath>
#include <optional>

#include "selfforce/acceptance.hpp"
#include "selfforce/analytic.hpp"
#include "selfforce/diagnostics.hpp"
#include "selfforce/fdtd.hpp"
#include "selfforce/output.hpp"
#include "selfforce/regularized.hpp"

namespace selfforce::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Output times k dt for k = 0..floor(T/dt) with k a multiple of the stride.
std::vector<double> output_times(const config::RunConfig& cfg) {
  const double dt = cfg.time_step();
  const std::size_t steps = fdtd::step_count(cfg.numerics.T, dt);
  std::vector<double> times;
  for (std::size_t k = 0; k <= steps; k += cfg.numerics.stride) times.push_back(static_cast<double>(k) * dt);
  return times;
}

json base_summary(const config::RunConfig& cfg) {
  json doc;
  doc["format_version"] = output::kFormatVersion;
  doc["mode"] = std::string(config::to_string(cfg.mode));
  doc["damping_time"] = damping_time(cfg.physics);
  doc["snapshots"] = json::array();
  return doc;
}

void note_snapshot(json& doc, std::size_t index, double t) {
  doc["snapshots"].push_back({{"index", index}, {"t", t}, {"file", output::snapshot_name(index)}});
}

// Writes what exists so far when a run throws, then lets the error through.
template <class Body>
void with_partial_summary(const fs::path& dir, json& summary, output::TimeseriesWriter* writer, Body&& body) {
  try {
    body();
  } catch (const Error& e) {
    summary["aborted"] = e.what();
    if (writer) {
      summary["rows"] = writer->rows();
      writer->flush();
    }
    output::write_json(dir / "run.json", summary);
    throw;
  }
}

int run_analytic(const config::RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  PhysicalParams p = cfg.physics;
  p.sigma = 0.0;
  const analytic::DeltaSolution sol(p, cfg.numerics.T);
  const auto times = output_times(cfg);
  json summary = base_summary(cfg);
  output::TimeseriesWriter writer(dir / "timeseries.csv");

  with_partial_summary(dir, summary, &writer, [&] {
    const EnergyLedger ledger = analytic::energy_ledger(p, times);
    for (const auto& e : ledger.samples) writer.write(e, analytic::position(p, e.t), analytic::velocity(p, e.t));
    writer.flush();
    for (std::size_t i = 0; i < cfg.numerics.snapshot_times.size(); ++i) {
      const double t = cfg.numerics.snapshot_times[i];
      output::write_snapshot(dir / output::snapshot_name(i), output::analytic_snapshot(sol, t));
      note_snapshot(summary, i, t);
    }
    summary["rows"] = writer.rows();
    if (ledger.samples.size() >= 2) summary["energy_residual"] = diagnostics::energy_residual(ledger, p);
    summary["tf_uff_gap"] = diagnostics::tf_uff_gap(ledger);
  });
  output::write_json(dir / "run.json", summary);
  log << "analytic: " << writer.rows() << " rows, " << cfg.numerics.snapshot_times.size() << " snapshots in "
      << dir.string() << '\n';
  return 0;
}

int run_duhamel(const config::RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const PhysicalParams& p = cfg.physics;
  const analytic::DeltaSolution sol(p, cfg.numerics.T);
  const Trajectory& traj = sol.trajectory();
  const regularized::GaussianSource src(p.sigma, p.beta);
  std::vector<double> snap_times = cfg.numerics.snapshot_times;
  if (snap_times.empty()) snap_times.push_back(cfg.numerics.T);

  json summary = base_summary(cfg);
  summary["trajectory"] = "point-source solution, prescribed";
  output::TimeseriesWriter writer(dir / "timeseries.csv");

  with_partial_summary(dir, summary, &writer, [&] {
    for (double t : output_times(cfg)) {
      const auto now = traj.eval(t);
      writer.write(regularized::quadrature_energies(traj, src, p, t), now.y, now.v);
    }
    writer.flush();
    for (std::size_t i = 0; i < snap_times.size(); ++i) {
      output::write_snapshot(dir / output::snapshot_name(i),
                             output::duhamel_snapshot(traj, src, cfg.probes, snap_times[i], p.c));
      note_snapshot(summary, i, snap_times[i]);
    }
    summary["rows"] = writer.rows();
  });
  output::write_json(dir / "run.json", summary);
  log << "duhamel: " << writer.rows() << " rows, " << snap_times.size() << " probe snapshots in " << dir.string()
      << '\n';
  return 0;
}

int run_fdtd(const config::RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const PhysicalParams& p = cfg.physics;
  fdtd::RunSettings settings;
  settings.dx = *cfg.numerics.dx;
  settings.dt = cfg.time_step();
  settings.horizon = cfg.numerics.T;
  settings.stride = cfg.numerics.stride;
  settings.snapshot_times = cfg.numerics.snapshot_times;

  // The grid is only known inside the run; rebuild it the same way here so
  // snapshots can be written the moment they are produced.
  const fdtd::Grid grid = fdtd::Grid::causal(p, settings.horizon, settings.dx);
  json summary = base_summary(cfg);
  summary["grid"] = {{"dx", grid.dx}, {"n", grid.n}, {"x_min", grid.x_min()}, {"x_max", grid.x_max()}};
  summary["dt"] = settings.dt;
  output::TimeseriesWriter writer(dir / "timeseries.csv");
  std::size_t snap_index = 0;

  fdtd::RunObserver observer;
  observer.on_sample = [&](const EnergySnapshot& e, const fdtd::TrajectorySample& s) { writer.write(e, s.y, s.v); };
  observer.on_snapshot = [&](const fdtd::FieldSnapshot& snap) {
    output::write_snapshot(dir / output::snapshot_name(snap_index), output::fdtd_snapshot(grid, snap));
    note_snapshot(summary, snap_index, snap.t);
    ++snap_index;
  };

  std::optional<fdtd::RunResult> run;
  with_partial_summary(dir, summary, &writer, [&] { run = fdtd::run_coupled(settings, p, &observer); });
  writer.flush();
  const fdtd::RunResult& result = *run;

  summary["rows"] = writer.rows();
  summary["steps"] = fdtd::step_count(settings.horizon, settings.dt);
  summary["bounds"] = {{"max_gradient_ratio", result.bounds.max_gradient_ratio},
                       {"gradient_ok", result.bounds.gradient_ok},
                       {"growth_ok", result.bounds.growth_ok}};
  if (result.ledger.samples.size() >= 2) {
    summary["energy_residual"] = diagnostics::energy_residual(result.ledger, p);
    summary["energy_drift"] = diagnostics::energy_drift(result.ledger);
  }
  summary["tf_uff_gap"] = diagnostics::tf_uff_gap(result.ledger);
  output::write_json(dir / "run.json", summary);
  log << "fdtd: " << writer.rows() << " rows, " << snap_index << " snapshots, grid n = " << grid.n << " in "
      << dir.string() << '\n';
  return 0;
}

int run_verify(const config::RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  acceptance::Report partial;
  auto on_result = [&](const acceptance::Criterion& c) {
    log << acceptance::summary_line(c) << std::endl;
    partial.criteria.push_back(c);
  };
  try {
    const auto report = acceptance::run_acceptance(cfg, on_result);
    output::write_json(dir / "report.json", acceptance::to_json(report));
    log << (report.all_pass() ? "all criteria passed" : "some criteria FAILED") << '\n';
    return report.all_pass() ? 0 : 1;
  } catch (const Error& e) {
    auto doc = acceptance::to_json(partial);
    doc["aborted"] = e.what();
    output::write_json(dir / "report.json", doc);
    throw;
  }
}

}  // namespace

int run(const config::RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  output::prepare_directory(out_dir, cfg);
  switch (cfg.mode) {
    case config::Mode::Analytic:
      return run_analytic(cfg, out_dir, log);
    case config::Mode::Duhamel:
      return run_duhamel(cfg, out_dir, log);
    case config::Mode::Fdtd:
      return run_fdtd(cfg, out_dir, log);
    case config::Mode::Verify:
      return run_verify(cfg, out_dir, log);
  }
  return 2;
}

}  // namespace selfforce::runner
