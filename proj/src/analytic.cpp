#include "selfforce/analytic.hpp"

#include <cmath>
#include <string>

#include "selfforce/numerics.hpp"

namespace selfforce::analytic {

namespace {

constexpr numerics::QuadratureTolerance kQuadTol{1e-14, 1e-12};

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::OutOfRange, "time must be finite and >= 0, got " + std::to_string(t));
  }
}

void require_within(const DeltaSolution& sol, double t) {
  require_time(t);
  if (t > sol.horizon()) {
    throw Error(ErrorCode::HorizonExceeded,
                "t = " + std::to_string(t) + " beyond horizon " + std::to_string(sol.horizon()));
  }
}

// (beta^2 c / 4) / (c^2 - v^2): the field self-energy growth rate, which
// after the change of variables x = y(tau) -+ c (t - tau) is also T_f's.
double field_energy_rate(const PhysicalParams& p, double tau) {
  const double v = velocity(p, tau);
  return 0.25 * p.beta * p.beta * p.c / (p.c * p.c - v * v);
}

double field_energy(const PhysicalParams& p, double t0, double t1) {
  return numerics::integrate([&](double s) { return field_energy_rate(p, s); }, t0, t1, kQuadTol).value;
}

PhysicalParams delta_limit(PhysicalParams p) {
  p.sigma = 0.0;
  return validate_params(p);
}

Trajectory sample_trajectory(const PhysicalParams& p, double horizon) {
  require_time(horizon);
  const double step = damping_time(p) / 1000.0;
  const auto intervals = static_cast<std::size_t>(std::ceil(horizon / step));
  std::vector<double> times{0.0}, ys{0.0}, vs{p.v0};
  times.reserve(intervals + 1);
  ys.reserve(intervals + 1);
  vs.reserve(intervals + 1);
  for (std::size_t i = 1; i <= intervals; ++i) {
    const double t = (i == intervals) ? horizon : horizon * static_cast<double>(i) / static_cast<double>(intervals);
    const double dy =
        numerics::integrate([&](double s) { return velocity(p, s); }, times.back(), t, kQuadTol).value;
    ys.push_back(ys.back() + dy);
    vs.push_back(velocity(p, t));
    times.push_back(t);
  }
  return Trajectory(std::move(times), std::move(ys), std::move(vs));
}

}  // namespace

double velocity(const PhysicalParams& p, double t) {
  require_time(t);
  if (p.v0 == 0.0 || t == 0.0) return p.v0;

  // With u = ln(|v0| / v) the implicit relation reads
  //   F(u) = c^2 u - v0^2 (1 - e^{-2u}) / 2 - beta^2 t / (2 c m) = 0,
  // F' = c^2 - v^2 > 0, and the root lies in [t/t_d, t/t_d + v0^2 / 2c^2].
  const double a = std::abs(p.v0);
  const double c2 = p.c * p.c;
  const double drive = p.beta * p.beta * t / (2.0 * p.c * p.m);
  auto F = [&](double u) { return c2 * u + 0.5 * a * a * std::expm1(-2.0 * u) - drive; };

  // Widened by a few ulps: for tiny |v0| the two ends sit within rounding of
  // each other and of the root.
  const double lo = drive / c2 * (1.0 - 1e-15);
  const double hi = (drive / c2 + 0.5 * a * a / c2) * (1.0 + 1e-15);
  if (F(lo) > 0.0 || F(hi) < 0.0) {
    throw Error(ErrorCode::NonConvergence, "velocity root not bracketed at t = " + std::to_string(t));
  }
  const double u = numerics::bisect_increasing(F, lo, hi, 0.0);
  return std::copysign(a * std::exp(-u), p.v0);
}

double position(const PhysicalParams& p, double t) {
  require_time(t);
  if (p.v0 == 0.0) return 0.0;
  return numerics::integrate([&](double s) { return velocity(p, s); }, 0.0, t, kQuadTol).value;
}

DeltaSolution::DeltaSolution(const PhysicalParams& p, double horizon)
    : params_(delta_limit(p)), horizon_(horizon), trajectory_(sample_trajectory(params_, horizon)) {}

double tau_of_x(const DeltaSolution& sol, double x, double t) {
  require_within(sol, t);
  const double c = sol.params().c;
  const double ct = c * t;
  if (x <= -ct || x >= ct) return 0.0;

  const Trajectory& traj = sol.trajectory();
  const double yt = traj.position(t);
  if (x == yt) return t;

  const double tol = 1e-13 * (1.0 + t);
  if (x < yt) {
    // y(tau) - c (t - tau) increases from -ct to y(t).
    return numerics::bisect_increasing([&](double tau) { return traj.position(tau) - c * (t - tau) - x; },
                                       0.0, t, tol);
  }
  // y(tau) + c (t - tau) decreases from ct to y(t).
  return numerics::bisect_increasing([&](double tau) { return x - (traj.position(tau) + c * (t - tau)); },
                                     0.0, t, tol);
}

double phi(const DeltaSolution& sol, double x, double t) {
  const auto& p = sol.params();
  return p.beta / (2.0 * p.c) * tau_of_x(sol, x, t);
}

double dphi_dx(const DeltaSolution& sol, double x, double t) {
  require_within(sol, t);
  const auto& p = sol.params();
  const double c = p.c;
  const double scale = p.beta / (2.0 * c);
  const double ct = c * t;
  const Trajectory& traj = sol.trajectory();
  const TrajectoryPoint now = traj.eval(t);

  if (x == now.y) return -scale * now.v / (c * c - now.v * now.v);
  if (x <= -ct || x >= ct) return 0.0;

  const double v = traj.velocity(tau_of_x(sol, x, t));
  return x < now.y ? scale / (c + v) : -scale / (c - v);
}

double dphi_dt(const DeltaSolution& sol, double x, double t) {
  require_within(sol, t);
  const double ct = sol.params().c * t;
  const double yt = sol.trajectory().position(t);
  if (x == yt || x == ct || x == -ct) {
    throw Error(ErrorCode::UndefinedAtKink, "dphi/dt undefined at x = " + std::to_string(x));
  }
  if (x < -ct || x > ct) return 0.0;
  const double side = x < yt ? 1.0 : -1.0;
  return sol.params().c * dphi_dx(sol, x, t) * side;
}

EnergySnapshot energies(const DeltaSolution& sol, double t) {
  require_time(t);
  const auto& p = sol.params();
  const double v = velocity(p, t);
  const double field = field_energy(p, 0.0, t);
  EnergySnapshot s;
  s.t = t;
  s.T_p = 0.5 * p.m * v * v;
  s.T_f = field;
  s.U_ff = field;
  s.U_fp = -(p.beta * p.beta / (2.0 * p.c)) * t + 0.0;
  return s;
}

EnergyLedger energy_ledger(const PhysicalParams& params, std::span<const double> times) {
  const PhysicalParams p = delta_limit(params);
  EnergyLedger ledger{Provenance::Analytic, {}};
  ledger.samples.reserve(times.size());
  double prev_t = 0.0;
  double field = 0.0;
  for (double t : times) {
    require_time(t);
    if (t < prev_t) throw Error(ErrorCode::OutOfRange, "ledger times must be ascending");
    field += field_energy(p, prev_t, t);
    prev_t = t;
    const double v = velocity(p, t);
    EnergySnapshot s;
    s.t = t;
    s.T_p = 0.5 * p.m * v * v;
    s.T_f = field;
    s.U_ff = field;
    s.U_fp = -(p.beta * p.beta / (2.0 * p.c)) * t + 0.0;
    ledger.samples.push_back(s);
  }
  return ledger;
}

}  // namespace selfforce::analytic
