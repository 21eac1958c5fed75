#pragma once

namespace ifp {

/// Economic primitives of the deterministic income-fluctuation problem.
///
/// All rates share one time unit. Valid parameters satisfy rho > r >= 0
/// (impatience), gamma > 0 and y > 0; see validate().
struct ModelParams {
  double rho = 0.0;    ///< subjective discount rate
  double r = 0.0;      ///< net interest rate
  double gamma = 0.0;  ///< relative risk aversion
  double y = 0.0;      ///< permanent income flow
};

/// Constants shared by the r = 0 closed form and the small-r approximation.
struct DerivedConstants {
  double b = 0.0;    ///< rho / gamma
  double b_r = 0.0;  ///< (r(gamma - 1) + rho) / gamma, equals b at r = 0
  double d_r = 0.0;  ///< (rho - r) / (r(gamma - 1) + rho), equals 1 at r = 0
  double y = 0.0;

  /// a + y / b_r; the o(r) remainder is not included.
  double c_r(double a) const { return a + y / b_r; }
};

/// Returns params unchanged or throws ValidationError naming the violated
/// invariant.
ModelParams validate(const ModelParams& params);

DerivedConstants derived_constants(const ModelParams& params);

/// CRRA utility c^{1-gamma}/(1-gamma); log utility at gamma = 1.
double crra_utility(double c, double gamma);

/// Upper bound u(rho a + y)/rho on discounted utility of any feasible plan.
double value_upper_bound(const ModelParams& params, double a);

/// Figure-1 calibration: r = 0.01, gamma = 0.5, rho = 0.08, y = 3.
inline constexpr ModelParams kFigureParams{0.08, 0.01, 0.5, 3.0};

}  // namespace ifp
