#include "selfforce/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace selfforce {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SuperluminalInitialVelocity: return "SuperluminalInitialVelocity";
    case ErrorCode::NonPositiveMass: return "NonPositiveMass";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::NegativeSigma: return "NegativeSigma";
    case ErrorCode::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorCode::InvalidTrajectory: return "InvalidTrajectory";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::UndefinedAtKink: return "UndefinedAtKink";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::SourceUnderresolved: return "SourceUnderresolved";
    case ErrorCode::SuperluminalVelocity: return "SuperluminalVelocity";
    case ErrorCode::BoundaryContact: return "BoundaryContact";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::InvalidLadder: return "InvalidLadder";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

PhysicalParams validate_params(const PhysicalParams& p) {
  for (double value : {p.m, p.c, p.beta, p.v0, p.sigma}) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFiniteParameter, "physical parameters must be finite");
    }
  }
  if (!(p.m > 0.0)) {
    throw Error(ErrorCode::NonPositiveMass, "m = " + std::to_string(p.m) + " must be > 0");
  }
  if (!(p.c > 0.0)) {
    throw Error(ErrorCode::NonPositiveSpeed, "c = " + std::to_string(p.c) + " must be > 0");
  }
  if (p.beta == 0.0) {
    throw Error(ErrorCode::ZeroCoupling, "beta must be nonzero");
  }
  if (std::abs(p.v0) >= p.c) {
    throw Error(ErrorCode::SuperluminalInitialVelocity,
                "|v0| = " + std::to_string(std::abs(p.v0)) + " must be < c = " + std::to_string(p.c));
  }
  if (p.sigma < 0.0) {
    throw Error(ErrorCode::NegativeSigma, "sigma = " + std::to_string(p.sigma) + " must be >= 0");
  }
  return p;
}

double damping_time(const PhysicalParams& p) {
  return 2.0 * p.m * p.c * p.c * p.c / (p.beta * p.beta);
}

double gradient_growth_constant(const PhysicalParams& p) {
  if (!(p.sigma > 0.0)) {
    throw Error(ErrorCode::NegativeSigma, "growth constant needs sigma > 0");
  }
  return std::abs(p.beta) / (p.c * p.sigma * std::sqrt(2.0 * std::numbers::pi));
}

Trajectory::Trajectory(std::vector<double> times, std::vector<double> positions,
                       std::vector<double> velocities)
    : times_(std::move(times)), positions_(std::move(positions)), velocities_(std::move(velocities)) {
  if (times_.empty() || times_.size() != positions_.size() || times_.size() != velocities_.size()) {
    throw Error(ErrorCode::InvalidTrajectory, "times, positions and velocities must be non-empty and equally long");
  }
  if (times_.front() != 0.0 || positions_.front() != 0.0) {
    throw Error(ErrorCode::InvalidTrajectory, "trajectory must start at t = 0 with y = 0");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(positions_[i]) || !std::isfinite(velocities_[i])) {
      throw Error(ErrorCode::InvalidTrajectory, "non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidTrajectory, "sample times must be strictly increasing");
    }
  }
}

TrajectoryPoint Trajectory::eval(double tau) const {
  if (!(tau >= 0.0 && tau <= times_.back())) {
    throw Error(ErrorCode::OutOfRange,
                "tau = " + std::to_string(tau) + " outside [0, " + std::to_string(times_.back()) + "]");
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), tau);
  std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (times_[i] == tau) {
    return {positions_[i], velocities_[i]};
  }
  const double h = times_[i + 1] - times_[i];
  const double s = (tau - times_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;

  const double y0 = positions_[i], y1 = positions_[i + 1];
  const double m0 = h * velocities_[i], m1 = h * velocities_[i + 1];

  const double y = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 +
                   (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
  const double dy = ((6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * m0 +
                     (6.0 * s - 6.0 * s2) * y1 + (3.0 * s2 - 2.0 * s) * m1) / h;
  return {y, dy};
}

double Trajectory::max_speed() const {
  double vmax = 0.0;
  for (double v : velocities_) vmax = std::max(vmax, std::abs(v));
  return vmax;
}

void Trajectory::check_subluminal(double c) const {
  for (std::size_t i = 0; i < velocities_.size(); ++i) {
    if (std::abs(velocities_[i]) >= c) {
      throw Error(ErrorCode::SuperluminalVelocity,
                  "|v| = " + std::to_string(std::abs(velocities_[i])) + " >= c at t = " + std::to_string(times_[i]));
    }
  }
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::T_p: return "T_p";
    case Quantity::T_f: return "T_f";
    case Quantity::U_ff: return "U_ff";
    case Quantity::U_fp: return "U_fp";
    case Quantity::H: return "H";
  }
  return "?";
}

Quantity quantity_from_string(std::string_view name) {
  for (Quantity q : {Quantity::T_p, Quantity::T_f, Quantity::U_ff, Quantity::U_fp, Quantity::H}) {
    if (to_string(q) == name) return q;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown energy quantity '" + std::string(name) + "'");
}

double value_of(const EnergySnapshot& s, Quantity q) {
  switch (q) {
    case Quantity::T_p: return s.T_p;
    case Quantity::T_f: return s.T_f;
    case Quantity::U_ff: return s.U_ff;
    case Quantity::U_fp: return s.U_fp;
    case Quantity::H: return s.H();
  }
  return 0.0;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Analytic: return "analytic";
    case Provenance::Quadrature: return "quadrature";
    case Provenance::Discrete: return "discrete";
  }
  return "?";
}

std::vector<double> EnergyLedger::times() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.t);
  return out;
}

std::vector<double> EnergyLedger::column(Quantity q) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(value_of(s, q));
  return out;
}

}  // namespace selfforce
