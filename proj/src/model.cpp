#include "ifp/model.hpp"

#include <cmath>

#include "ifp/errors.hpp"

namespace ifp {

ModelParams validate(const ModelParams& params) {
  if (!std::isfinite(params.rho) || !std::isfinite(params.r) || !std::isfinite(params.gamma) ||
      !std::isfinite(params.y)) {
    throw ValidationError("parameters must be finite");
  }
  if (params.r < 0) throw ValidationError("r must be non-negative (r >= 0)");
  if (params.rho <= params.r) throw ValidationError("impatience violated: rho must exceed r");
  if (params.gamma <= 0) throw ValidationError("gamma must be positive");
  if (params.y <= 0) throw ValidationError("y must be positive");
  return params;
}

DerivedConstants derived_constants(const ModelParams& params) {
  const double denom = params.r * (params.gamma - 1) + params.rho;
  return {params.rho / params.gamma, denom / params.gamma, (params.rho - params.r) / denom, params.y};
}

double crra_utility(double c, double gamma) {
  if (!(c > 0)) throw DomainError("crra_utility: consumption must be positive");
  if (gamma == 1.0) return std::log(c);
  return std::pow(c, 1 - gamma) / (1 - gamma);
}

double value_upper_bound(const ModelParams& params, double a) {
  return crra_utility(params.rho * a + params.y, params.gamma) / params.rho;
}

}  // namespace ifp
