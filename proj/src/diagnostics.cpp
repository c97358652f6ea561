#include "selfforce/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "selfforce/fdtd.hpp"
#include "selfforce/parallel.hpp"

namespace selfforce::diagnostics {

LineFit fit_line(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw Error(ErrorCode::InvalidConfig, "fit_line: size mismatch");
  const std::size_t n = t.size();
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "fit_line needs at least 2 samples");

  // Centre first; the raw normal equations lose digits for late windows.
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += t[i];
    ym += y[i];
  }
  tm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    sty += (t[i] - tm) * (y[i] - ym);
  }
  if (!(stt > 0.0)) throw Error(ErrorCode::InsufficientSamples, "fit_line needs two distinct abscissae");

  LineFit fit;
  fit.samples = n;
  fit.slope = sty / stt;
  fit.intercept = ym - fit.slope * tm;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * t[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

double theoretical_slope(Quantity q, const PhysicalParams& p) {
  const double b2 = p.beta * p.beta;
  switch (q) {
    case Quantity::U_fp:
      return -b2 / (2.0 * p.c);
    case Quantity::U_ff:
    case Quantity::T_f:
      return b2 / (4.0 * p.c);
    case Quantity::T_p:
    case Quantity::H:
      return 0.0;
  }
  return 0.0;
}

AsymptoticFit fit_linear_asymptote(const EnergyLedger& ledger, Quantity q, TimeWindow window,
                                   const PhysicalParams& p) {
  const double td = damping_time(p);
  if (ledger.samples.empty()) throw Error(ErrorCode::InsufficientSamples, "empty ledger");
  if (!(window.lo < window.hi)) throw Error(ErrorCode::InvalidWindow, "fit window needs lo < hi");
  if (window.lo < 5.0 * td * (1.0 - 1e-12)) {
    throw Error(ErrorCode::InvalidWindow, "fit window starts at t = " + std::to_string(window.lo) +
                                              ", before 5 damping times (" + std::to_string(5.0 * td) + ")");
  }
  const double first = ledger.samples.front().t;
  const double last = ledger.samples.back().t;
  const double slack = 1e-12 * std::max(1.0, last);
  if (window.lo < first - slack || window.hi > last + slack) {
    throw Error(ErrorCode::InvalidWindow, "fit window [" + std::to_string(window.lo) + ", " +
                                              std::to_string(window.hi) + "] leaves the run [" +
                                              std::to_string(first) + ", " + std::to_string(last) + "]");
  }

  std::vector<double> ts, ys;
  for (const auto& s : ledger.samples) {
    if (s.t >= window.lo - slack && s.t <= window.hi + slack) {
      ts.push_back(s.t);
      ys.push_back(value_of(s, q));
    }
  }
  if (ts.size() < 20) {
    throw Error(ErrorCode::InsufficientSamples,
                std::to_string(ts.size()) + " samples in the fit window, need at least 20");
  }

  AsymptoticFit out;
  out.quantity = q;
  out.window = window;
  out.fit = fit_line(ts, ys);
  out.theoretical_slope = theoretical_slope(q, p);
  const double diff = std::abs(out.fit.slope - out.theoretical_slope);
  out.relative_error = out.theoretical_slope != 0.0 ? diff / std::abs(out.theoretical_slope) : diff;
  return out;
}

double energy_drift(const EnergyLedger& ledger) {
  if (ledger.samples.size() < 2) throw Error(ErrorCode::InsufficientSamples, "energy drift needs 2 samples");
  const double h0 = ledger.samples.front().H();
  double worst = 0.0;
  for (const auto& s : ledger.samples) worst = std::max(worst, std::abs(s.H() - h0));
  return worst;
}

double energy_residual(const EnergyLedger& ledger, const PhysicalParams& p) {
  const double drift = energy_drift(ledger);
  const double h0 = ledger.samples.front().H();
  return drift / std::max(std::abs(h0), p.m * p.c * p.c * 1e-12);
}

bool ConvergenceReport::monotone() const {
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(errors[i + 1] < errors[i])) return false;
  }
  return errors.size() >= 2;
}

void check_ladder(std::span<const double> ladder) {
  if (ladder.size() < 3) throw Error(ErrorCode::InvalidLadder, "a refinement ladder needs at least 3 rungs");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || !std::isfinite(ladder[i])) {
      throw Error(ErrorCode::InvalidLadder, "ladder rungs must be finite and positive");
    }
    if (i > 0 && !(ladder[i] < ladder[i - 1])) {
      throw Error(ErrorCode::InvalidLadder, "ladder must be strictly decreasing");
    }
  }
}

void compute_orders(ConvergenceReport& report) {
  report.orders.clear();
  for (std::size_t i = 0; i + 1 < report.errors.size(); ++i) {
    const double e0 = report.errors[i], e1 = report.errors[i + 1];
    if (e0 > 0.0 && e1 > 0.0) {
      report.orders.push_back(std::log(e0 / e1) / std::log(report.ladder[i] / report.ladder[i + 1]));
    } else {
      report.orders.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
}

ConvergenceReport sigma_convergence(const PhysicalParams& params, std::span<const double> sigma_ladder,
                                    double horizon, std::span<const double> probe_times, double courant) {
  check_ladder(sigma_ladder);
  PhysicalParams base = params;
  base.sigma = 0.0;
  validate_params(base);

  ConvergenceReport report;
  report.parameter = "sigma";
  report.oracle = "point-source velocity v(t) from the implicit damping law";
  report.ladder.assign(sigma_ladder.begin(), sigma_ladder.end());
  report.errors.assign(sigma_ladder.size(), 0.0);
  report.rms_errors.assign(sigma_ladder.size(), 0.0);

  parallel_for(sigma_ladder.size(), [&](std::size_t k) {
    PhysicalParams p = base;
    p.sigma = sigma_ladder[k];
    fdtd::RunSettings settings;
    settings.dx = p.sigma / 5.0;
    settings.dt = courant * settings.dx / p.c;
    settings.horizon = horizon;
    const std::size_t steps = fdtd::step_count(horizon, settings.dt);
    settings.stride = std::max<std::size_t>(steps, 1);
    const auto run = fdtd::run_coupled(settings, p);

    const auto times = run.trajectory.times();
    const auto vel = run.trajectory.velocities();
    std::vector<std::size_t> nodes;
    if (probe_times.empty()) {
      for (std::size_t i = 0; i < times.size(); ++i) nodes.push_back(i);
    } else {
      for (double t : probe_times) {
        const auto i = static_cast<std::size_t>(std::llround(t / settings.dt));
        if (t < 0.0 || i >= times.size()) {
          throw Error(ErrorCode::OutOfRange, "probe time " + std::to_string(t) + " outside the run");
        }
        nodes.push_back(i);
      }
    }
    double worst = 0.0, ss = 0.0;
    for (std::size_t i : nodes) {
      const double e = std::abs(vel[i] - analytic::velocity(p, times[i]));
      worst = std::max(worst, e);
      ss += e * e;
    }
    report.errors[k] = worst;
    report.rms_errors[k] = nodes.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(nodes.size()));
  });

  compute_orders(report);
  return report;
}

double tf_uff_gap(const analytic::DeltaSolution& sol, std::span<const double> times) {
  double worst = 0.0;
  for (double t : times) {
    const auto e = analytic::energies(sol, t);
    worst = std::max(worst, std::abs(e.T_f - e.U_ff));
  }
  return worst;
}

double tf_uff_gap(const EnergyLedger& ledger) {
  double worst = 0.0;
  for (const auto& s : ledger.samples) worst = std::max(worst, std::abs(s.T_f - s.U_ff));
  return worst;
}

}  // namespace selfforce::diagnostics
