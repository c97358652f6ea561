#pragma once

// File formats: CSV time series and field snapshots at 17 significant digits
// with '\n' line ends, the echoed config, a format-version marker, and JSON
// summaries.

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfforce/analytic.hpp"
#include "selfforce/config.hpp"
#include "selfforce/core.hpp"
#include "selfforce/fdtd.hpp"
#include "selfforce/regularized.hpp"

namespace selfforce::output {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kTimeseriesHeader = "t,y,v,T_p,T_f,U_ff,U_fp,H";
inline constexpr const char* kSnapshotHeader = "x,phi,dphi_dx,dphi_dt";

/// `t,y,v,T_p,T_f,U_ff,U_fp,H` row for one output time (no newline).
std::string timeseries_row(const EnergySnapshot& e, double y, double v);

/// Streams time-series rows to disk. Rows already written survive an
/// exception thrown later in the run: the stream is flushed on destruction.
class TimeseriesWriter {
public:
  explicit TimeseriesWriter(const std::filesystem::path& path);
  void write(const EnergySnapshot& e, double y, double v);
  std::size_t rows() const { return rows_; }
  void flush();

private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t rows_ = 0;
};

struct SnapshotRow {
  double x = 0.0;
  double phi = 0.0;
  double dphi_dx = 0.0;
  std::optional<double> dphi_dt;  // empty where the field has a kink
};

std::string snapshot_row(const SnapshotRow& r);
void write_snapshot(const std::filesystem::path& path, std::span<const SnapshotRow> rows);

/// 2001 uniform points on [-(ct + margin), ct + margin] with the kinks at
/// -ct, y(t) and ct merged in. margin = c max(t, t_d) / 4.
std::vector<SnapshotRow> analytic_snapshot(const analytic::DeltaSolution& sol, double t);

/// Grid values with centred dphi/dx and the solver's field rate.
std::vector<SnapshotRow> fdtd_snapshot(const fdtd::Grid& grid, const fdtd::FieldSnapshot& snap);

/// Regularized field at the probe points by quadrature.
std::vector<SnapshotRow> duhamel_snapshot(const Trajectory& traj, const regularized::GaussianSource& src,
                                          std::span<const double> probes, double t, double c);

/// Creates `dir` and writes the echoed config and the format-version marker.
void prepare_directory(const std::filesystem::path& dir, const config::RunConfig& cfg);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// snapshot_<index>.csv
std::string snapshot_name(std::size_t index);

}  // namespace selfforce::output
