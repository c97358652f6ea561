#pragma once

// Cross-checks between the tiers: straight-line fits of the energy
// constituents at late times, Hamiltonian drift, and sigma -> 0 convergence
// of the grid solver towards the point-source trajectory.

#include <span>
#include <string>
#include <vector>

#include "selfforce/analytic.hpp"
#include "selfforce/core.hpp"

namespace selfforce::diagnostics {

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;  // L2 norm of y - (slope t + intercept)
  std::size_t samples = 0;
};

/// Ordinary least squares y = slope t + intercept. Needs >= 2 distinct t.
LineFit fit_line(std::span<const double> t, std::span<const double> y);

struct AsymptoticFit {
  Quantity quantity = Quantity::H;
  TimeWindow window;
  LineFit fit;
  double theoretical_slope = 0.0;
  /// |slope - theory| / |theory|, or |slope| when the theory is 0.
  double relative_error = 0.0;
};

/// Late-time slope of each constituent in the point-source limit:
/// U_fp -> -beta^2/2c, U_ff and T_f -> beta^2/4c, T_p and H -> 0.
double theoretical_slope(Quantity q, const PhysicalParams& p);

/// Fits the samples with t in [window.lo, window.hi]. Throws InvalidWindow if
/// the window starts before 5 damping times or leaves the ledger's span, and
/// InsufficientSamples below 20 samples.
AsymptoticFit fit_linear_asymptote(const EnergyLedger& ledger, Quantity q, TimeWindow window,
                                   const PhysicalParams& p);

/// max_t |H(t) - H(0)| / max(|H(0)|, m c^2 1e-12).
double energy_residual(const EnergyLedger& ledger, const PhysicalParams& p);

/// max_t |H(t) - H(0)|.
double energy_drift(const EnergyLedger& ledger);

struct ConvergenceReport {
  std::string parameter;  // "sigma" or "dx"
  std::string oracle;     // what the errors are measured against
  std::vector<double> ladder;
  std::vector<double> errors;      // max abs error per rung
  std::vector<double> rms_errors;  // rms over the same probe set
  /// log(e_k / e_{k+1}) / log(l_k / l_{k+1}) for each successive pair.
  std::vector<double> orders;

  bool monotone() const;
  double final_order() const { return orders.empty() ? 0.0 : orders.back(); }
};

/// Throws InvalidLadder unless strictly decreasing, positive, >= 3 rungs.
void check_ladder(std::span<const double> ladder);

/// Fills `orders` from `ladder` and `errors`.
void compute_orders(ConvergenceReport& report);

/// For each sigma runs the coupled grid solver with dx = sigma / 5 and
/// dt = courant dx / c, and compares its velocity with the point-source
/// velocity at the probe times (every step when `probe_times` is empty).
/// Rungs run concurrently up to the SELFFORCE_THREADS cap.
ConvergenceReport sigma_convergence(const PhysicalParams& p, std::span<const double> sigma_ladder, double horizon,
                                    std::span<const double> probe_times, double courant = 0.5);

/// max |T_f - U_ff| over the given times of the point-source solution.
double tf_uff_gap(const analytic::DeltaSolution& sol, std::span<const double> times);

/// max |T_f - U_ff| over a ledger.
double tf_uff_gap(const EnergyLedger& ledger);

}  // namespace selfforce::diagnostics
