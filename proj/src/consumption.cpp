#include "ifp/consumption.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ifp/errors.hpp"
#include "ifp/lambert_w.hpp"

namespace ifp {

namespace {

void require_r0(const ModelParams& params, const char* what) {
  if (params.r != 0) throw DomainError(std::string(what) + ": requires r == 0");
}

void require_interior(double a, const char* what) {
  if (!(a > 0) || !std::isfinite(a)) {
    throw DomainError(std::string(what) + ": requires a > 0 (derivatives are unbounded at a = 0)");
  }
}

// -1 - W_{-1}(f(a;y)) at r = 0.
double branch_gap_r0(const ModelParams& params, double a) {
  return lambert_wm1_gap(params.rho / params.gamma * a / params.y);
}

}  // namespace

DepletionTime depletion_time(const ModelParams& params, double a) {
  return params.r == 0 ? h_closed_r0(params, a) : h_numeric(params, a);
}

double consumption_given_depletion(const ModelParams& params, double T, double t) {
  if (!(t >= 0)) throw DomainError("consumption time must be >= 0");
  if (t > T) return params.y;
  const double rate = (params.rho - params.r) / params.gamma;
  return params.y * std::exp(rate * (T - t));
}

double consumption_path(const ModelParams& params, double a, double t) {
  return consumption_given_depletion(params, depletion_time(params, a).T, t);
}

double consumption_now_r0(const ModelParams& params, double a) {
  require_r0(params, "consumption_now_r0");
  return consumption_given_depletion(params, h_closed_r0(params, a).T, 0.0);
}

double consumption_approx_small_r(const ModelParams& params, double a, double t) {
  return consumption_given_depletion(params, h_approx_small_r(params, a).T, t);
}

Jacobian jacobian_closed(const ModelParams& params, double a) {
  validate(params);
  require_r0(params, "jacobian_closed");
  require_interior(a, "jacobian_closed");
  const double b = params.rho / params.gamma;
  const double u = branch_gap_r0(params, a);
  // w = -1 - u. dc/da = b w/(1+w) = b (1+u)/u.
  // dc/dy = -w (1 + (b a/y)/(1+w)) = (1+u)(u - b a/y)/u, and u - b a/y = log1p(u).
  return {b * (1 + u) / u, (1 + u) * std::log1p(u) / u};
}

Hessian hessian_closed(const ModelParams& params, double a) {
  validate(params);
  require_r0(params, "hessian_closed");
  require_interior(a, "hessian_closed");
  const double b = params.rho / params.gamma;
  const double y = params.y;
  const double u = branch_gap_r0(params, a);
  // w/(1+w)^3 = (1+u)/u^3 > 0.
  const double k = b * b * (1 + u) / (u * u * u);
  return {-k / y, k * a / (y * y), -k * a * a / (y * y * y)};
}

ConsumptionDerivatives derivatives_closed(const ModelParams& params, double a) {
  const Jacobian j = jacobian_closed(params, a);
  const Hessian h = hessian_closed(params, a);
  return {consumption_now_r0(params, a), j.dc_da, j.dc_dy, h.d2c_da2, h.d2c_dady, h.d2c_dy2};
}

double consumption_unconstrained(const ModelParams& params, double a) {
  validate(params);
  if (!(params.r > 0)) throw DomainError("consumption_unconstrained: requires r > 0");
  const double kappa = (params.rho + params.r * (params.gamma - 1)) / params.gamma;
  return kappa * (a + params.y / params.r);
}

PiecewiseLinearPolicy::PiecewiseLinearPolicy(double delta, std::vector<Knot> knots)
    : delta_(delta), knots_(std::move(knots)) {
  if (knots_.size() < 2) throw DomainError("PiecewiseLinearPolicy: needs at least two knots");
  segments_.reserve(knots_.size() - 1);
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    const Knot& lo = knots_[k - 1];
    const Knot& hi = knots_[k];
    const double slope = (hi.consumption - lo.consumption) / (hi.mu - lo.mu);
    segments_.push_back({lo.mu, hi.mu, slope, lo.consumption - slope * lo.mu});
  }
}

double PiecewiseLinearPolicy::operator()(double a) const {
  if (!(a >= 0) || a > a_max()) throw DomainError("PiecewiseLinearPolicy: assets outside [0, a_max]");
  // First knot with mu >= a; segment k-1 covers (mu_{k-1}, mu_k].
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), a,
                                   [](const Knot& k, double v) { return k.mu < v; });
  if (it == knots_.begin()) return knots_.front().consumption;
  if (it->mu == a) return it->consumption;
  const auto k = static_cast<std::size_t>(it - knots_.begin());
  const Knot& lo = knots_[k - 1];
  const Knot& hi = knots_[k];
  const double s = (a - lo.mu) / (hi.mu - lo.mu);
  return lo.consumption + s * (hi.consumption - lo.consumption);
}

PiecewiseLinearPolicy discrete_policy(const ModelParams& params, double delta, double a_max,
                                      KnotRule rule) {
  validate(params);
  if (!(a_max > 0) || !std::isfinite(a_max)) throw DomainError("discrete_policy: a_max must be positive");
  int n = 16;
  for (;;) {
    KnotSequence seq = mu_discrete(params, delta, n, rule);
    if (seq.knots().back().mu >= a_max) {
      std::vector<Knot> knots;
      for (const Knot& k : seq.knots()) {
        knots.push_back(k);
        if (k.mu >= a_max) break;
      }
      return PiecewiseLinearPolicy(delta, std::move(knots));
    }
    if (n > (1 << 26)) throw ConvergenceError("discrete_policy: knots do not reach a_max");
    n *= 2;
  }
}

}  // namespace ifp
