#include "selfforce/regularized.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "selfforce/numerics.hpp"

namespace selfforce::regularized {

namespace {

constexpr numerics::QuadratureTolerance kTol{1e-13, 1e-10};
constexpr numerics::QuadratureTolerance kEnergyTol{1e-12, 1e-8};

// Characteristic geometry of the field point (x, t) against the trajectory.
// g_plus(tau) = y(tau) - c (t - tau) rises from -ct to y(t); g_minus(tau) =
// y(tau) + c (t - tau) falls from ct to y(t). Both are strictly monotone
// because |v| < c.
class Characteristics {
public:
  Characteristics(const Trajectory& traj, double x, double t, double c)
      : traj_(traj), x_(x), t_(t), c_(c), ct_(c * t), yt_(traj.position(t)), tol_(1e-14 * (1.0 + t)) {}

  double x() const { return x_; }

  // Offsets of the field point from the source centre along each family.
  double plus_offset(double tau) const { return x_ - (traj_.position(tau) - c_ * (t_ - tau)); }
  double minus_offset(double tau) const { return x_ - (traj_.position(tau) + c_ * (t_ - tau)); }

  // Emission time at which g_plus reaches `level`, clipped to [0, t].
  double plus_time(double level) const {
    if (level <= -ct_) return 0.0;
    if (level >= yt_) return t_;
    return numerics::bisect_increasing(
        [&](double tau) { return (traj_.position(tau) - c_ * (t_ - tau)) - level; }, 0.0, t_, tol_);
  }

  double minus_time(double level) const {
    if (level >= ct_) return 0.0;
    if (level <= yt_) return t_;
    return numerics::bisect_increasing(
        [&](double tau) { return level - (traj_.position(tau) + c_ * (t_ - tau)); }, 0.0, t_, tol_);
  }

  // Emission-time interval on which |plus_offset| <= r, with its centre.
  std::array<double, 3> plus_window(double r) const {
    return {plus_time(x_ - r), plus_time(x_), plus_time(x_ + r)};
  }
  std::array<double, 3> minus_window(double r) const {
    return {minus_time(x_ + r), minus_time(x_), minus_time(x_ - r)};
  }

private:
  const Trajectory& traj_;
  double x_, t_, c_, ct_, yt_, tol_;
};

void require_horizon(const Trajectory& traj, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::OutOfRange, "t must be >= 0");
  if (t > traj.horizon()) {
    throw Error(ErrorCode::HorizonExceeded,
                "t = " + std::to_string(t) + " beyond trajectory horizon " + std::to_string(traj.horizon()));
  }
}

struct RidgeIntegrals {
  double plus = 0.0;
  double minus = 0.0;
};

// Integrals of the source density along both characteristic families. The
// integrands vanish outside the windows where the family passes within the
// truncation radius of the particle, so only those windows are integrated.
RidgeIntegrals ridge_integrals(const Trajectory& traj, const GaussianSource& s, double x, double t, double c) {
  const Characteristics ch(traj, x, t, c);
  const auto pw = ch.plus_window(s.radius());
  const auto mw = ch.minus_window(s.radius());
  RidgeIntegrals r;
  r.plus = numerics::integrate_pieces([&](double tau) { return s.density(ch.plus_offset(tau)); }, pw, kTol).value;
  r.minus =
      numerics::integrate_pieces([&](double tau) { return s.density(ch.minus_offset(tau)); }, mw, kTol).value;
  return r;
}

}  // namespace

GaussianSource::GaussianSource(double sigma, double beta)
    : sigma_(sigma), beta_(beta), norm_(1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi))) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::NegativeSigma, "Gaussian source needs finite sigma > 0, got " + std::to_string(sigma));
  }
}

double GaussianSource::density(double r) const {
  if (std::abs(r) > radius()) return 0.0;
  const double z = r / sigma_;
  return norm_ * std::exp(-0.5 * z * z);
}

double GaussianSource::cdf_term(double r) const {
  const double R = radius();
  return std::erf(std::clamp(r, -R, R) / (std::numbers::sqrt2 * sigma_));
}

double source_value(const GaussianSource& s, double x, double y) { return s.density(x - y); }

double phi_duhamel(const Trajectory& traj, const GaussianSource& s, double x, double t, double c) {
  require_horizon(traj, t);
  if (t == 0.0) return 0.0;
  const Characteristics ch(traj, x, t, c);
  const double R = s.radius();
  const auto pw = ch.plus_window(R);
  const auto mw = ch.minus_window(R);

  // Source mass inside the domain of dependence [x - c(t-tau), x + c(t-tau)]
  // at emission time tau. Piecewise constant away from the two windows.
  std::vector<double> breaks{0.0, t};
  breaks.insert(breaks.end(), pw.begin(), pw.end());
  breaks.insert(breaks.end(), mw.begin(), mw.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto mass = [&](double tau) { return 0.5 * (s.cdf_term(ch.plus_offset(tau)) - s.cdf_term(ch.minus_offset(tau))); };
  const double integral = numerics::integrate_pieces(mass, breaks, kTol).value;
  return s.beta() / (2.0 * c) * integral;
}

double dphi_dx_duhamel(const Trajectory& traj, const GaussianSource& s, double x, double t, double c) {
  require_horizon(traj, t);
  if (t == 0.0) return 0.0;
  const auto r = ridge_integrals(traj, s, x, t, c);
  return s.beta() / (2.0 * c) * (r.plus - r.minus);
}

double dphi_dt_duhamel(const Trajectory& traj, const GaussianSource& s, double x, double t, double c) {
  require_horizon(traj, t);
  if (t == 0.0) return 0.0;
  const auto r = ridge_integrals(traj, s, x, t, c);
  return 0.5 * s.beta() * (r.plus + r.minus);
}

EnergySnapshot quadrature_energies(const Trajectory& traj, const GaussianSource& s, const PhysicalParams& p,
                                   double t) {
  require_horizon(traj, t);
  const TrajectoryPoint now = traj.eval(t);
  EnergySnapshot e;
  e.t = t;
  e.T_p = 0.5 * p.m * now.v * now.v;
  if (t == 0.0) return e;

  const double c = p.c;
  const double R = s.radius();
  const double ct = c * t;
  const double lo = -ct - R;
  const double hi = ct + R;
  std::vector<double> breaks;
  for (double b : {lo, -ct + R, now.y - R, now.y + R, ct - R, hi}) breaks.push_back(std::clamp(b, lo, hi));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto kinetic = [&](double x) {
    const double rate = dphi_dt_duhamel(traj, s, x, t, c);
    return 0.5 * rate * rate;
  };
  auto strain = [&](double x) {
    const double grad = dphi_dx_duhamel(traj, s, x, t, c);
    return 0.5 * c * c * grad * grad;
  };
  e.T_f = numerics::integrate_pieces(kinetic, breaks, kEnergyTol).value;
  e.U_ff = numerics::integrate_pieces(strain, breaks, kEnergyTol).value;

  const std::array<double, 3> core{now.y - R, now.y, now.y + R};
  e.U_fp = -p.beta * numerics::integrate_pieces(
                         [&](double x) { return phi_duhamel(traj, s, x, t, c) * s.density(x - now.y); }, core,
                         kEnergyTol)
                         .value;
  return e;
}

}  // namespace selfforce::regularized
