#pragma once

// Optimal consumption: the time path for a given depletion time, the r = 0
// closed form with its exact derivatives, the small-r approximation, and the
// discrete-time piecewise-linear policy.

#include <vector>

#include "ifp/depletion.hpp"
#include "ifp/model.hpp"

namespace ifp {

struct Jacobian {
  double dc_da = 0.0;  ///< MPC out of assets
  double dc_dy = 0.0;  ///< MPC out of permanent income
};

struct Hessian {
  double d2c_da2 = 0.0;
  double d2c_dady = 0.0;
  double d2c_dy2 = 0.0;

  double determinant() const { return d2c_da2 * d2c_dy2 - d2c_dady * d2c_dady; }
};

/// Level, Jacobian and Hessian of c*(a; y) at one point.
struct ConsumptionDerivatives {
  double c = 0.0;
  double dc_da = 0.0;
  double dc_dy = 0.0;
  double d2c_da2 = 0.0;
  double d2c_dady = 0.0;
  double d2c_dy2 = 0.0;
};

/// Exact depletion time when r == 0, numeric inversion otherwise.
DepletionTime depletion_time(const ModelParams& params, double a);

/// y e^{(rho - r)(T - t)/gamma} for t <= T and y afterwards.
double consumption_given_depletion(const ModelParams& params, double T, double t);

/// Optimal consumption at time t for initial assets a.
double consumption_path(const ModelParams& params, double a, double t);

/// c*(a; y) = y e^{rho h(a;y)/gamma} with the Lambert-W depletion time; r == 0.
double consumption_now_r0(const ModelParams& params, double a);

/// Time path evaluated with the small-r depletion time approximation.
double consumption_approx_small_r(const ModelParams& params, double a, double t);

/// Closed-form gradient of c*(a; y) for r == 0 and a > 0.
Jacobian jacobian_closed(const ModelParams& params, double a);

/// Closed-form second derivatives of c*(a; y) for r == 0 and a > 0.
/// All entries are proportional to w/(1+w)^3 with w = W_{-1}(f(a;y)).
Hessian hessian_closed(const ModelParams& params, double a);

ConsumptionDerivatives derivatives_closed(const ModelParams& params, double a);

/// Standard unconstrained CRRA policy kappa (a + y/r) with
/// kappa = (rho + r(gamma - 1))/gamma. Needs r > 0. Not part of the
/// constrained solution; used as the figure overlay.
double consumption_unconstrained(const ModelParams& params, double a);

struct PolicySegment {
  double a_lo = 0.0;
  double a_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Discrete-time consumption function, linear between depletion knots.
class PiecewiseLinearPolicy {
 public:
  PiecewiseLinearPolicy(double delta, std::vector<Knot> knots);

  /// Consumption flow at assets a in [0, a_max()].
  double operator()(double a) const;

  double delta() const { return delta_; }
  double a_max() const { return knots_.back().mu; }
  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<PolicySegment>& segments() const { return segments_; }

 private:
  double delta_;
  std::vector<Knot> knots_;
  std::vector<PolicySegment> segments_;
};

/// Builds knots until mu(k delta) >= a_max. The default rule keeps the knots
/// consistent with the period budget a' = (1 + r d) a + d (y - c).
PiecewiseLinearPolicy discrete_policy(const ModelParams& params, double delta, double a_max,
                                      KnotRule rule = KnotRule::budget_consistent);

}  // namespace ifp
