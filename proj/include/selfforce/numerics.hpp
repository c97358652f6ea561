#pragma once

// Small numerical building blocks shared by the analytic and regularized
// tiers: adaptive Gauss-Kronrod integration and monotone bisection.

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "selfforce/error.hpp"

namespace selfforce::numerics {

struct QuadratureTolerance {
  double abs = 0.0;
  double rel = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

namespace detail {

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;

  bool operator<(const Segment& other) const { return error < other.error; }
};

/// 21-point Kronrod rule with its embedded 10-point Gauss rule; the error
/// estimate is their difference.
template <class F>
Segment kronrod21(F& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // x[0] = 0 is Kronrod-only; the Gauss-10 nodes are the odd indices.
  const double f0 = f(centre);
  double kronrod = wk[0] * f0;
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = half * x[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += wk[i] * pair;
    if (i % 2 == 1) gauss += wg[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs(kronrod - gauss) * half};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on [a, b]: the segment with the largest
/// error estimate is bisected until the summed estimate falls below
/// max(tol.abs, tol.rel * |integral|). Returns 0 for empty intervals.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, QuadratureTolerance tol, std::size_t max_segments = 2000) {
  if (!(b > a)) return {};
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::kronrod21(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;

  while (error > std::max(tol.abs, tol.rel * std::abs(value))) {
    if (heap.size() >= max_segments) return {value, error, false};
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) return {value, error, false};
    heap.pop();
    const auto left = detail::kronrod21(f, worst.a, mid);
    const auto right = detail::kronrod21(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Resum from the leaves so the result does not carry update round-off.
  value = 0.0;
  error = 0.0;
  std::vector<detail::Segment> leaves;
  leaves.reserve(heap.size());
  while (!heap.empty()) {
    leaves.push_back(heap.top());
    heap.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& s : leaves) {
    value += s.value;
    error += s.error;
  }
  return {value, error, true};
}

/// Sum of adaptive integrals over consecutive breakpoints, which must be
/// sorted. Used where the integrand has known ridges or kinks; each piece
/// gets the full tolerance.
template <class F>
QuadratureResult integrate_pieces(F&& f, std::span<const double> breaks, QuadratureTolerance tol) {
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto piece = integrate(f, breaks[i], breaks[i + 1], tol);
    total.value += piece.value;
    total.error += piece.error;
    total.converged = total.converged && piece.converged;
  }
  return total;
}

/// Root of a nondecreasing function g on [lo, hi] with g(lo) <= 0 <= g(hi).
/// Halves the bracket until it is narrower than tol or stops shrinking in
/// floating point, then returns the bracket midpoint.
template <class G>
double bisect_increasing(G&& g, double lo, double hi, double tol) {
  for (int iter = 0; iter < 2000; ++iter) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw Error(ErrorCode::NonConvergence, "bisection did not terminate on [" + std::to_string(lo) +
                                             ", " + std::to_string(hi) + "]");
}

}  // namespace selfforce::numerics
