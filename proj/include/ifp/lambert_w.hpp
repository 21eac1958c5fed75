#pragma once

// Real branches of the Lambert W function.
//
// W0 maps [-1/e, inf) onto [-1, inf) and W_{-1} maps [-1/e, 0) onto
// (-inf, -1]. Both are refined with Halley's method on g(w) = w e^w - x
// from branch-specific starting points. Inputs within a few ulp below -1/e
// are clamped to the branch point, since -1/e is not representable.
//
// lambert_wm1_gap() evaluates W_{-1} on the exponential scale used by the
// consumption closed forms, where the argument itself would underflow or
// lose its distance to the branch point in rounding.

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>

#include "ifp/errors.hpp"

namespace ifp {

/// The common point of both real branches: W0(-1/e) = W_{-1}(-1/e) = -1.
template <std::floating_point Real = double>
struct BranchPoint {
  static constexpr Real x_min = static_cast<Real>(-0.367879441171442321595523770161460867L);
  static constexpr Real w_at_branch = Real(-1);
};

/// Inputs this far below -1/e (4 ulp of 1/e) are treated as -1/e.
template <std::floating_point Real = double>
constexpr Real branch_tolerance() {
  // 1/e lies in [1/4, 1/2), where one ulp is epsilon/4.
  return 4 * std::numeric_limits<Real>::epsilon() / 4;
}

namespace detail {

template <std::floating_point Real>
constexpr int kHalleyMaxIterations = 30;

template <std::floating_point Real>
Real halley_refine(Real x, Real w) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real step_tol = Real(4.5) * eps;  // 1e-15 for double
  for (int i = 0; i < kHalleyMaxIterations<Real>; ++i) {
    const Real ew = std::exp(w);
    const Real g = w * ew - x;
    if (g == 0) break;
    const Real wp1 = w + 1;
    if (wp1 == 0) break;
    const Real denom = ew * wp1 - (w + 2) * g / (2 * wp1);
    const Real step = g / denom;
    w -= step;
    if (std::abs(step) <= step_tol * (1 + std::abs(w))) break;
    // Near the branch point the residual hits rounding level before the step
    // does; further iterations only dither.
    if (std::abs(g) <= eps * std::abs(x)) break;
  }
  return w;
}

// Newton on w + ln(-w) = ln(-x); used when w e^w would go subnormal.
template <std::floating_point Real>
Real wm1_log_refine(Real x, Real w) {
  const Real target = std::log(-x);
  for (int i = 0; i < kHalleyMaxIterations<Real>; ++i) {
    const Real h = w + std::log(-w) - target;
    const Real step = h / (1 + 1 / w);
    w -= step;
    if (std::abs(step) <= Real(4.5) * std::numeric_limits<Real>::epsilon() * std::abs(w)) break;
  }
  return w;
}

template <std::floating_point Real>
bool at_branch_point(Real x) {
  return std::abs(x - BranchPoint<Real>::x_min) <= branch_tolerance<Real>();
}

template <std::floating_point Real>
Real branch_series_p(Real x) {
  const Real q = 2 * (1 + std::numbers::e_v<Real> * x);
  return q > 0 ? std::sqrt(q) : Real(0);
}

}  // namespace detail

/// Starting point for the W_{-1} iteration on (-1/e, 0).
///
/// Uses the branch-point series in p = sqrt(2(1 + e x)) for x < -1/4 and the
/// asymptotic expansion ln(-x) - ln(-ln(-x)) + ln(-ln(-x))/ln(-x) otherwise.
/// Always returns a value below -1 for x in the open interval.
template <std::floating_point Real>
Real wm1_initial_guess(Real x) {
  if (x < Real(-0.25)) {
    const Real p = detail::branch_series_p(x);
    return -1 - p - p * p / 3 - Real(11) / 72 * p * p * p;
  }
  const Real l1 = std::log(-x);
  const Real l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

/// Lower real branch W_{-1}(x) for x in [-1/e, 0). Returns w <= -1.
template <std::floating_point Real>
Real lambert_wm1(Real x) {
  if (std::isnan(x) || x >= 0 || x < BranchPoint<Real>::x_min - branch_tolerance<Real>()) {
    throw DomainError("lambert_wm1: argument outside [-1/e, 0)");
  }
  if (detail::at_branch_point(x)) return BranchPoint<Real>::w_at_branch;
  const Real w0 = wm1_initial_guess(x);
  if (-x < std::numeric_limits<Real>::min() * Real(1e10)) {
    return detail::wm1_log_refine(x, w0);
  }
  return detail::halley_refine(x, w0);
}

/// Principal real branch W0(x) for x >= -1/e. Returns w >= -1.
template <std::floating_point Real>
Real lambert_w0(Real x) {
  if (std::isnan(x) || x < BranchPoint<Real>::x_min - branch_tolerance<Real>()) {
    throw DomainError("lambert_w0: argument below -1/e");
  }
  if (detail::at_branch_point(x)) return BranchPoint<Real>::w_at_branch;
  if (x == 0) return 0;
  if (std::isinf(x)) return x;
  Real w;
  if (x < Real(-0.25)) {
    const Real p = detail::branch_series_p(x);
    w = -1 + p - p * p / 3 + Real(11) / 72 * p * p * p;
  } else if (x < 3) {
    w = std::log1p(x);
  } else {
    const Real l1 = std::log(x);
    const Real l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  return detail::halley_refine(x, w);
}

namespace detail {

// u - log1p(u), accurate for small u where the direct difference cancels.
inline double gap_phi(double u) {
  if (u < 0.25) {
    double term = u * u;
    double sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double t = term / k;
      sum += (k % 2 == 0) ? t : -t;
      if (t < 1e-18 * sum) break;
      term *= u;
    }
    return sum;
  }
  return u - std::log1p(u);
}

}  // namespace detail

/// Distance of W_{-1} below the branch point on an exponential scale.
///
/// Returns u >= 0 with W_{-1}(-e^{-1-s}) = -1 - u, found from
/// u - log1p(u) = s. This stays accurate for s near zero (argument next to
/// -1/e) and for s far beyond the range where e^{-1-s} is representable.
inline double lambert_wm1_gap(double s) {
  if (std::isnan(s) || s < 0) throw DomainError("lambert_wm1_gap: exponent excess must be >= 0");
  if (s == 0) return 0.0;
  if (std::isinf(s)) return s;
  double u;
  if (s < 1) {
    const double q = std::sqrt(2 * s);
    u = q + q * q / 3 + q * q * q / 36;
  } else {
    u = s + std::log1p(s + std::log1p(s));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 100; ++i) {
    const double step = (detail::gap_phi(u) - s) * (1 + u) / u;
    u -= step;
    if (std::abs(step) <= 2 * kEps * u) break;
  }
  return u;
}

}  // namespace ifp
