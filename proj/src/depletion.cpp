#include "ifp/depletion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ifp/errors.hpp"
#include "ifp/lambert_w.hpp"

namespace ifp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxNewtonIterations = 200;

void require_time(double T) {
  if (!(T >= 0) || !std::isfinite(T)) throw DomainError("depletion time must be finite and >= 0");
}

void require_assets(double a) {
  if (!(a >= 0) || !std::isfinite(a)) throw DomainError("assets must be finite and >= 0");
}

}  // namespace

std::string_view to_string(DepletionMethod method) {
  switch (method) {
    case DepletionMethod::exact_r0:
      return "exact_r0";
    case DepletionMethod::approx_small_r:
      return "approx_small_r";
    case DepletionMethod::numeric:
      return "numeric";
  }
  return "unknown";
}

double expm1mx(double x) {
  if (std::abs(x) < 0.5) {
    double term = x * x / 2;
    double sum = term;
    for (int k = 3; k < 40; ++k) {
      term *= x / k;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

double mu(const ModelParams& params, double T) {
  validate(params);
  require_time(T);
  if (T == 0) return 0.0;
  const double y = params.y;
  if (params.r <= kRSwitch) {
    const double b = params.rho / params.gamma;
    return y / b * expm1mx(b * T);
  }
  // Rearranged closed form of the ODE solution
  //   k e^{(rho-r)T/gamma} - y/r + e^{-rT}(y/r - k),  k = gamma y/(r(gamma-1)+rho),
  // with every difference of nearly equal terms expressed through expm1.
  const double r = params.r;
  const DerivedConstants dc = derived_constants(params);
  const double k = y / dc.b_r;
  const double decay = std::exp(-r * T);
  return k * decay * expm1mx(dc.b_r * T) + y * expm1mx(-r * T) / r + y * T * std::expm1(-r * T);
}

double mu_prime(const ModelParams& params, double T) {
  validate(params);
  require_time(T);
  if (params.r <= kRSwitch) {
    return params.y * std::expm1(params.rho / params.gamma * T);
  }
  const DerivedConstants dc = derived_constants(params);
  return params.y * dc.d_r * std::exp(-params.r * T) * std::expm1(dc.b_r * T);
}

DepletionTime h_numeric(const ModelParams& params, double a) {
  validate(params);
  require_assets(a);
  if (a == 0) return {0.0, DepletionMethod::numeric};

  double lo = 0.0;
  double hi = 1.0;
  while (mu(params, hi) < a) {
    lo = hi;
    hi *= 2;
    if (!std::isfinite(hi)) throw ConvergenceError("h_numeric: could not bracket the depletion time");
  }

  const double tol = 1e-12 * std::max(a, params.y);
  // mu(T) ~ y (rho - r) T^2 / (2 gamma) near the origin.
  double T = std::sqrt(2 * a * params.gamma / ((params.rho - params.r) * params.y));
  if (!(T > lo && T < hi)) T = 0.5 * (lo + hi);

  double previous_step = std::numeric_limits<double>::infinity();
  int settled = 0;
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const double f = mu(params, T) - a;
    if (f == 0) return {T, DepletionMethod::numeric};
    if (f > 0) {
      hi = T;
    } else {
      lo = T;
    }
    if (std::abs(f) <= tol) {
      // Residual is within tolerance; keep polishing T until the Newton step
      // stalls at rounding level.
      if (previous_step <= 4 * kEps * T || hi - lo <= 4 * kEps * hi || ++settled >= 4) {
        return {T, DepletionMethod::numeric};
      }
    }
    double next = T - f / mu_prime(params, T);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    previous_step = std::abs(next - T);
    T = next;
  }
  throw ConvergenceError("h_numeric: no convergence after 200 iterations");
}

DepletionTime h_closed_r0(const ModelParams& params, double a) {
  validate(params);
  require_assets(a);
  if (params.r != 0) throw DomainError("h_closed_r0: requires r == 0");
  const double b = params.rho / params.gamma;
  // With w = W_{-1}(f(a;y)) and w e^w = f, the closed form
  // -(a + y/b)/y - w/b collapses to ln(-w)/b, and -w = 1 + gap.
  const double gap = lambert_wm1_gap(b * a / params.y);
  return {std::log1p(gap) / b, DepletionMethod::exact_r0};
}

DepletionTime h_approx_small_r(const ModelParams& params, double a) {
  validate(params);
  require_assets(a);
  const DerivedConstants dc = derived_constants(params);
  // -(1/(d_r y))(a + y/b_r) - W_{-1}(f_r)/(b_r d_r) = ln(-w_r)/(b_r d_r).
  const double gap = lambert_wm1_gap(dc.b_r * a / params.y);
  return {std::log1p(gap) / (dc.b_r * dc.d_r), DepletionMethod::approx_small_r};
}

double KnotSequence::mu_at(double T) const {
  if (knots_.empty()) throw DomainError("mu_at: empty knot sequence");
  if (!(T >= 0) || T > knots_.back().T * (1 + 1e-12)) throw DomainError("mu_at: T outside the knot range");
  if (T <= knots_.front().T) return knots_.front().mu;
  if (T >= knots_.back().T) return knots_.back().mu;
  const auto k = static_cast<std::size_t>(T / delta_);
  const std::size_t i = std::min(k, knots_.size() - 2);
  const Knot& l = knots_[i];
  const Knot& h = knots_[i + 1];
  const double s = (T - l.T) / (h.T - l.T);
  return l.mu + s * (h.mu - l.mu);
}

KnotSequence mu_discrete(const ModelParams& params, double delta, int n_knots, KnotRule rule) {
  validate(params);
  if (!(delta > 0) || !std::isfinite(delta)) throw DomainError("mu_discrete: delta must be positive");
  if (n_knots < 1) throw DomainError("mu_discrete: n_knots must be >= 1");

  const double growth = 1 + params.r * delta;
  // ln((1 + r d)/(1 + rho d)), negative under impatience.
  const double log_ratio = std::log1p(params.r * delta) - std::log1p(params.rho * delta);
  const double dy = delta * params.y;

  std::vector<Knot> knots;
  knots.reserve(static_cast<std::size_t>(n_knots) + 1);
  knots.push_back({0.0, 0.0, params.y});
  for (int k = 1; k <= n_knots; ++k) {
    const double rhs = std::exp(-k / params.gamma * log_ratio) * dy;
    const double prev = knots.back().mu;
    const double m = rule == KnotRule::implicit_sequence ? rhs - (dy - prev) / growth
                                                         : (prev - dy + rhs) / growth;
    knots.push_back({k * delta, m, rhs / delta});
  }
  return KnotSequence(delta, std::move(knots));
}

}  // namespace ifp
