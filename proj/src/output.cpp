#include "selfforce/output.hpp"

#include <algorithm>
#include <cmath>

#include "selfforce/format.hpp"

namespace selfforce::output {

namespace fs = std::filesystem;

namespace {

std::ofstream open_for_writing(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

void check_stream(const std::ofstream& out, const fs::path& path) {
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace

std::string timeseries_row(const EnergySnapshot& e, double y, double v) {
  std::string row;
  for (double value : {e.t, y, v, e.T_p, e.T_f, e.U_ff, e.U_fp, e.H()}) {
    if (!row.empty()) row += ',';
    row += format_number(value);
  }
  return row;
}

TimeseriesWriter::TimeseriesWriter(const fs::path& path) : path_(path), out_(open_for_writing(path)) {
  out_ << kTimeseriesHeader << '\n';
  check_stream(out_, path_);
}

void TimeseriesWriter::write(const EnergySnapshot& e, double y, double v) {
  out_ << timeseries_row(e, y, v) << '\n';
  check_stream(out_, path_);
  ++rows_;
}

void TimeseriesWriter::flush() {
  out_.flush();
  check_stream(out_, path_);
}

std::string snapshot_row(const SnapshotRow& r) {
  std::string row = format_number(r.x) + ',' + format_number(r.phi) + ',' + format_number(r.dphi_dx) + ',';
  if (r.dphi_dt) row += format_number(*r.dphi_dt);
  return row;
}

void write_snapshot(const fs::path& path, std::span<const SnapshotRow> rows) {
  auto out = open_for_writing(path);
  out << kSnapshotHeader << '\n';
  for (const auto& r : rows) out << snapshot_row(r) << '\n';
  out.flush();
  check_stream(out, path);
}

std::vector<SnapshotRow> analytic_snapshot(const analytic::DeltaSolution& sol, double t) {
  const auto& p = sol.params();
  const double ct = p.c * t;
  const double half = ct + 0.25 * p.c * std::max(t, damping_time(p));
  const double h = half / 1000.0;

  std::vector<double> xs;
  xs.reserve(2004);
  for (int i = -1000; i <= 1000; ++i) xs.push_back(i * h);
  xs.front() = -half;
  xs.back() = half;
  for (double k : {-ct, sol.trajectory().position(t), ct}) xs.push_back(k);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<SnapshotRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    SnapshotRow r{x, analytic::phi(sol, x, t), analytic::dphi_dx(sol, x, t), std::nullopt};
    try {
      r.dphi_dt = analytic::dphi_dt(sol, x, t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UndefinedAtKink) throw;
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<SnapshotRow> fdtd_snapshot(const fdtd::Grid& grid, const fdtd::FieldSnapshot& snap) {
  std::vector<SnapshotRow> rows(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    rows[j] = {grid.x(j), snap.phi[j], snap.dphi_dx[j], snap.dphi_dt[j]};
  }
  return rows;
}

std::vector<SnapshotRow> duhamel_snapshot(const Trajectory& traj, const regularized::GaussianSource& src,
                                          std::span<const double> probes, double t, double c) {
  std::vector<SnapshotRow> rows;
  rows.reserve(probes.size());
  for (double x : probes) {
    rows.push_back({x, regularized::phi_duhamel(traj, src, x, t, c), regularized::dphi_dx_duhamel(traj, src, x, t, c),
                    regularized::dphi_dt_duhamel(traj, src, x, t, c)});
  }
  return rows;
}

void prepare_directory(const fs::path& dir, const config::RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "': " + ec.message());

  auto echo = open_for_writing(dir / "config.echo");
  echo << config::echo_config(cfg);
  check_stream(echo, dir / "config.echo");

  auto version = open_for_writing(dir / "format_version");
  version << kFormatVersion << '\n';
  check_stream(version, dir / "format_version");
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  auto out = open_for_writing(path);
  out << doc.dump(2) << '\n';
  check_stream(out, path);
}

std::string snapshot_name(std::size_t index) {
  std::string n = std::to_string(index);
  if (n.size() < 3) n.insert(0, 3 - n.size(), '0');
  return "snapshot_" + n + ".csv";
}

}  // namespace selfforce::output
