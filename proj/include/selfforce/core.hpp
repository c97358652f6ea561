#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "selfforce/error.hpp"

namespace selfforce {

/// Physical constants of the particle-field system plus the width of the
/// regularized source. sigma == 0 selects the exact point-source limit.
struct PhysicalParams {
  double m = 1.0;
  double c = 1.0;
  double beta = 1.0;
  double v0 = 0.0;
  double sigma = 0.0;

  bool operator==(const PhysicalParams&) const = default;
};

/// Returns `p` unchanged when every invariant holds, otherwise throws.
/// beta == 0 is rejected: it decouples particle and field entirely.
PhysicalParams validate_params(const PhysicalParams& p);

/// e-folding time of the particle velocity near rest, 2 m c^3 / beta^2.
double damping_time(const PhysicalParams& p);

/// Growth constant B = (beta/c) sup|f_sigma| for the Gaussian
/// source, i.e. beta / (c sigma sqrt(2 pi)). Requires sigma > 0.
double gradient_growth_constant(const PhysicalParams& p);

struct TrajectoryPoint {
  double y = 0.0;
  double v = 0.0;
};

/// Sampled particle path with C^1 cubic Hermite interpolation between nodes.
/// Nodes start at t = 0 with y = 0; the stored velocities are the exact
/// derivative of the interpolant at every node.
class Trajectory {
public:
  Trajectory(std::vector<double> times, std::vector<double> positions,
             std::vector<double> velocities);

  /// Interpolated (y, v); exact at nodes. Throws OutOfRange outside [0, T].
  TrajectoryPoint eval(double tau) const;
  double position(double tau) const { return eval(tau).y; }
  double velocity(double tau) const { return eval(tau).v; }

  double horizon() const { return times_.back(); }
  double initial_velocity() const { return velocities_.front(); }
  double max_speed() const;

  /// Throws SuperluminalVelocity if any stored |v| >= c.
  void check_subluminal(double c) const;

  std::span<const double> times() const { return times_; }
  std::span<const double> positions() const { return positions_; }
  std::span<const double> velocities() const { return velocities_; }

private:
  std::vector<double> times_;
  std::vector<double> positions_;
  std::vector<double> velocities_;
};

struct EnergySnapshot {
  double t = 0.0;
  double T_p = 0.0;
  double T_f = 0.0;
  double U_ff = 0.0;
  double U_fp = 0.0;

  double H() const { return T_p + T_f + U_ff + U_fp; }
};

enum class Quantity { T_p, T_f, U_ff, U_fp, H };

std::string_view to_string(Quantity q);
Quantity quantity_from_string(std::string_view name);
double value_of(const EnergySnapshot& s, Quantity q);

enum class Provenance { Analytic, Quadrature, Discrete };

std::string_view to_string(Provenance p);

struct EnergyLedger {
  Provenance provenance = Provenance::Analytic;
  std::vector<EnergySnapshot> samples;

  std::vector<double> times() const;
  std::vector<double> column(Quantity q) const;
};

}  // namespace selfforce
