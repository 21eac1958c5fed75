#include "ifp/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ifp/consumption.hpp"
#include "ifp/depletion.hpp"
#include "ifp/errors.hpp"
#include "ifp/numerics.hpp"

namespace ifp {

// ---------------------------------------------------------------------------
// Budget simulation

double AssetPath::assets_at(double t) const {
  if (samples.empty()) throw DomainError("assets_at: empty path");
  if (t <= samples.front().t) return samples.front().a;
  if (t >= samples.back().t) return samples.back().a;
  const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double v, const PathSample& s) { return v < s.t; });
  const PathSample& lo = *(it - 1);
  const PathSample& hi = *it;
  const double h = hi.t - lo.t;
  const double s = (t - lo.t) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * lo.a + (s3 - 2 * s2 + s) * h * lo.dadt + (-2 * s3 + 3 * s2) * hi.a +
         (s3 - s2) * h * hi.dadt;
}

double AssetPath::min_assets() const {
  double m = std::numeric_limits<double>::infinity();
  for (const PathSample& s : samples) m = std::min(m, s.a);
  return m;
}

AssetPath simulate_assets(const ModelParams& params, double a0, double dt) {
  validate(params);
  if (!(a0 > 0) || !std::isfinite(a0)) throw DomainError("simulate_assets: a0 must be positive");
  const double T = depletion_time(params, a0).T;
  if (!(dt > 0) || dt > T / 100) throw DomainError("simulate_assets: dt must lie in (0, T/100]");

  const auto n_head = static_cast<long>(std::ceil(T / dt - 1e-9));
  const double h = T / static_cast<double>(n_head);
  const auto n_total = n_head + static_cast<long>(std::ceil(1.0 / h));

  const auto consumption = [&](double t) { return consumption_given_depletion(params, T, t); };
  const auto budget = [&](double t, double a) { return params.r * a + params.y - consumption(t); };

  AssetPath path;
  path.dt = h;
  path.depletion_time_closed = T;
  path.depletion_tolerance = 1e-12 * std::max(a0, params.y);
  path.samples.reserve(static_cast<std::size_t>(n_total) + 1);

  double a = a0;
  path.samples.push_back({0.0, a, consumption(0.0), budget(0.0, a)});
  for (long i = 0; i < n_total; ++i) {
    const double t = static_cast<double>(i) * h;
    a = numerics::rk4_step(budget, t, a, h);
    const double t1 = i + 1 == n_head ? T : static_cast<double>(i + 1) * h;
    path.samples.push_back({t1, a, consumption(t1), budget(t1, a)});
  }

  path.depletion_time_observed = std::numeric_limits<double>::infinity();
  const double tol = path.depletion_tolerance;
  for (std::size_t k = 1; k < path.samples.size(); ++k) {
    const PathSample& cur = path.samples[k];
    if (cur.a <= tol) {
      const PathSample& prev = path.samples[k - 1];
      const double frac = (prev.a - tol) / (prev.a - cur.a);
      path.depletion_time_observed = prev.t + frac * (cur.t - prev.t);
      break;
    }
  }
  return path;
}

// ---------------------------------------------------------------------------
// Discounted utility

double discounted_utility(const ModelParams& params, double T, const std::function<double(double)>& c_head,
                          double tol, int max_depth) {
  validate(params);
  const auto integrand = [&](double t) {
    return std::exp(-params.rho * t) * crra_utility(c_head(t), params.gamma);
  };
  const double head = T > 0 ? numerics::adaptive_simpson(integrand, 0.0, T, tol, max_depth) : 0.0;
  const double tail = std::exp(-params.rho * T) * crra_utility(params.y, params.gamma) / params.rho;
  return head + tail;
}

double pdv_utility(const ModelParams& params, double a0, double tol, int max_depth) {
  const double T = depletion_time(params, a0).T;
  return discounted_utility(
      params, T, [&](double t) { return consumption_given_depletion(params, T, t); }, tol, max_depth);
}

PerturbationReport perturbation_check(const ModelParams& params, double a0, double eps, int n_frequencies) {
  const double T = depletion_time(params, a0).T;
  if (!(T > 0)) throw DomainError("perturbation_check: needs a0 > 0");
  const auto optimal = [&](double t) { return consumption_given_depletion(params, T, t); };

  PerturbationReport report;
  report.optimal = discounted_utility(params, T, optimal);

  const auto present_value = [&](const std::function<double(double)>& c) {
    return numerics::adaptive_simpson([&](double t) { return std::exp(-params.r * t) * c(t); }, 0.0, T, 1e-12);
  };
  const double budget = present_value(optimal);
  for (int j = 0; j < n_frequencies; ++j) {
    // Non-commensurate with T so the perturbations do not integrate to zero.
    const double omega = 0.75 * std::numbers::pi * (j + 1) / T;
    const auto wobble = [&, omega](double t) { return optimal(t) * (1 + eps * std::sin(omega * t)); };
    const double scale = budget / present_value(wobble);
    report.frequencies.push_back(omega);
    report.perturbed.push_back(discounted_utility(params, T, [&](double t) { return scale * wobble(t); }));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Finite differences

Gradient2 fd_gradient(const ScalarField& fn, double a, double y, double h_a, double h_y) {
  const auto da = [&](double h) { return (fn(a + h, y) - fn(a - h, y)) / (2 * h); };
  const auto dy = [&](double h) { return (fn(a, y + h) - fn(a, y - h)) / (2 * h); };
  return {(4 * da(h_a / 2) - da(h_a)) / 3, (4 * dy(h_y / 2) - dy(h_y)) / 3};
}

Hessian2 fd_hessian(const ScalarField& fn, double a, double y, double h_a, double h_y) {
  const double f0 = fn(a, y);
  const auto daa = [&](double h) { return (fn(a + h, y) - 2 * f0 + fn(a - h, y)) / (h * h); };
  const auto dyy = [&](double h) { return (fn(a, y + h) - 2 * f0 + fn(a, y - h)) / (h * h); };
  const auto day = [&](double h, double k) {
    return (fn(a + h, y + k) - fn(a + h, y - k) - fn(a - h, y + k) + fn(a - h, y - k)) / (4 * h * k);
  };
  return {(4 * daa(h_a / 2) - daa(h_a)) / 3, (4 * day(h_a / 2, h_y / 2) - day(h_a, h_y)) / 3,
          (4 * dyy(h_y / 2) - dyy(h_y)) / 3};
}

double fd_step_first(double scale) { return std::cbrt(std::numeric_limits<double>::epsilon()) * scale; }

double fd_step_second(double scale) {
  // The extrapolated stencil is O(h^4), so roundoff eps/h^2 balances at eps^{1/6}.
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0) * scale;
}

// ---------------------------------------------------------------------------
// Discrete-time dynamic programming

std::vector<double> make_asset_grid(int n, double a_max, double y) {
  if (n < 3 || !(a_max > 0) || !(y > 0)) throw DomainError("make_asset_grid: need n >= 3, a_max > 0, y > 0");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  if (a_max <= y) {
    for (int i = 0; i < n; ++i) grid.push_back(a_max * i / (n - 1));
    return grid;
  }
  // Mean spacing below y is a fifth of the mean spacing above.
  const int n_low = std::clamp(static_cast<int>(std::lround(n * 5 * y / (5 * y + a_max - y))), 1, n - 2);
  const int n_high = n - n_low;
  for (int i = 0; i < n_low; ++i) grid.push_back(y * i / n_low);
  const double ratio = a_max / y;
  for (int j = 0; j < n_high; ++j) grid.push_back(y * std::pow(ratio, static_cast<double>(j) / (n_high - 1)));
  grid.back() = a_max;
  return grid;
}

DpSolution grid_dp(const ModelParams& params, double delta, std::span<const double> a_grid, int max_iterations) {
  validate(params);
  if (!(delta > 0)) throw DomainError("grid_dp: delta must be positive");
  if (a_grid.size() < 3 || a_grid.front() != 0.0 || !std::is_sorted(a_grid.begin(), a_grid.end())) {
    throw DomainError("grid_dp: grid must be sorted, start at 0 and have >= 3 nodes");
  }
  const std::size_t n = a_grid.size();
  const double gross = 1 + params.r * delta;
  const double beta = 1 / (1 + params.rho * delta);
  const double a_max = a_grid.back();
  const double c_floor = params.y * 1e-6;
  const auto u = [&](double c) { return crra_utility(c, params.gamma); };

  DpSolution sol;
  sol.asset_grid.assign(a_grid.begin(), a_grid.end());
  sol.value.resize(n);
  sol.policy.resize(n);
  // Start from consuming interest plus income forever.
  for (std::size_t i = 0; i < n; ++i) {
    sol.value[i] = delta * u(params.y + params.r * a_grid[i]) / (1 - beta);
  }

  std::vector<double> next(n);
  for (int it = 1; it <= max_iterations; ++it) {
    const numerics::MonotoneCubic continuation(a_grid, sol.value);
    double residual = 0.0;
    bool converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double resources = gross * a_grid[i] + delta * params.y;
      const double c_hi = resources / delta;
      const double c_lo = std::max(c_floor, (resources - a_max) / delta);
      const auto objective = [&](double c) {
        return delta * u(c) + beta * continuation(std::max(0.0, resources - delta * c));
      };
      numerics::GoldenResult best = numerics::golden_section_max(objective, c_lo, c_hi, 1e-10 * (1 + c_hi));
      const double at_hi = objective(c_hi);
      if (at_hi >= best.value) best = {c_hi, at_hi};
      next[i] = best.value;
      sol.policy[i] = best.x;
      const double change = std::abs(next[i] - sol.value[i]);
      residual = std::max(residual, change);
      if (change > 1e-10 * (1 + std::abs(sol.value[i]))) converged = false;
    }
    sol.value.swap(next);
    sol.iterations = it;
    sol.sup_norm_residual = residual;
    if (converged) return sol;
  }
  throw ConvergenceError("grid_dp: value iteration did not converge");
}

// ---------------------------------------------------------------------------
// Small-r approximation error

std::vector<ApproximationErrorRow> approximation_error_report(const ModelParams& params_base,
                                                              std::span<const double> r_list,
                                                              std::span<const double> a_grid) {
  std::vector<ApproximationErrorRow> rows;
  for (const double r : r_list) {
    ModelParams p = params_base;
    p.r = r;
    validate(p);
    ApproximationErrorRow row{r, 0.0, 0.0, 0.0};
    double sum = 0.0;
    for (const double a : a_grid) {
      const double reference = consumption_path(p, a, 0.0);
      const double gap = std::abs(consumption_approx_small_r(p, a, 0.0) - reference) / reference;
      sum += gap;
      if (gap > row.max_rel_gap) {
        row.max_rel_gap = gap;
        row.a_at_max = a;
      }
    }
    row.mean_rel_gap = a_grid.empty() ? 0.0 : sum / static_cast<double>(a_grid.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ifp
