#include "ifp/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ifp/cli.hpp"
#include "ifp/consumption.hpp"
#include "ifp/depletion.hpp"
#include "ifp/lambert_w.hpp"
#include "ifp/validation.hpp"

namespace ifp::checks {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CheckResult at_most(int criterion, std::string name, double measured, double tolerance, std::string note = {}) {
  return {criterion, std::move(name), measured, tolerance, measured <= tolerance, std::move(note)};
}

CheckResult holds(int criterion, std::string name, bool ok, double measured, std::string note = {}) {
  return {criterion, std::move(name), measured, 0.0, ok, std::move(note)};
}

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / double(n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

std::vector<double> lin_space(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i / double(n - 1));
  v.back() = hi;
  return v;
}

ModelParams with_r(ModelParams p, double r) {
  p.r = r;
  return p;
}

double rel_err(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

// -W_{-1}(-e^{-s}) in extended precision, independent of the double kernel.
// Halley on the argument where it is representable, Newton on
// w + ln(-w) = -s otherwise.
long double minus_wm1_of_neg_exp(long double s) {
  const long double x = -std::exp(-s);
  if (x != 0 && std::abs(x) >= std::numeric_limits<long double>::min()) return -lambert_wm1<long double>(x);
  long double w = -s - std::log(s);
  for (int i = 0; i < 60; ++i) {
    const long double step = (w + std::log(-w) + s) / (1 + 1 / w);
    w -= step;
    if (std::abs(step) <= 4 * std::numeric_limits<long double>::epsilon() * std::abs(w)) break;
  }
  return -w;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<CheckResult> lambert_kernel(const Options& options) {
  const auto start = Clock::now();
  const double inv_e = -BranchPoint<double>::x_min;
  std::vector<CheckResult> out;

  // W_{-1}: 5000 points toward 0 and 5000 toward the branch point.
  double worst_m1 = 0.0;
  const auto check_m1 = [&](double x) {
    const double w = lambert_wm1(x);
    worst_m1 = std::max(worst_m1, std::abs(w * std::exp(w) - x) / std::abs(x));
  };
  for (const double m : log_space(1e-12, inv_e - 1e-12, 5000)) check_m1(-m);
  for (const double d : log_space(1e-12, inv_e - 1e-12, 5000)) check_m1(-inv_e + d);
  out.push_back(at_most(1, "W_{-1} residual |w e^w - x|/|x| on (-1/e, 0)", worst_m1, options.lambert_residual_tol));

  double worst_0 = 0.0;
  const auto check_0 = [&](double x) {
    const double w = lambert_w0(x);
    worst_0 = std::max(worst_0, std::abs(w * std::exp(w) - x) / std::max(std::abs(x), 1e-300));
  };
  check_0(BranchPoint<double>::x_min);
  check_0(0.0);
  for (const double d : log_space(1e-12, inv_e - 1e-12, 3000)) check_0(-inv_e + d);
  for (const double m : log_space(1e-12, inv_e, 2000)) check_0(-m);
  for (const double x : log_space(1e-12, 10.0, 5000)) check_0(x);
  out.push_back(at_most(1, "W0 residual on [-1/e, 10]", worst_0, options.lambert_residual_tol));

  double worst_rt = 0.0;
  for (const double w : lin_space(-50.0, -1.0, 10000)) {
    worst_rt = std::max(worst_rt, std::abs(lambert_wm1(w * std::exp(w)) - w));
  }
  out.push_back(at_most(1, "W_{-1} round trip |W(w e^w) - w| on [-50, -1]", worst_rt, 1e-12));
  out.push_back(at_most(1, "Lambert kernel runtime [s]", seconds_since(start), 1.0));
  return out;
}

std::vector<CheckResult> closed_form_vs_numeric(const ModelParams& params) {
  const ModelParams p = with_r(params, 0.0);
  const double y = p.y;
  const double b = p.rho / p.gamma;
  double worst = 0.0;
  double worst_identity = 0.0;
  for (const double ratio : log_space(1e-6, 1e6, 200)) {
    const double a = ratio * y;
    const double c = consumption_now_r0(p, a);
    const double c_num = y * std::exp(p.rho * h_numeric(p, a).T / p.gamma);
    worst = std::max(worst, rel_err(c, c_num));
    // f(a;y) = -exp(-(b/y)(a + y/b)); identity c = -y W_{-1}(f).
    const long double s = 1.0L + static_cast<long double>(b) * a / y;
    const long double c_identity = static_cast<long double>(y) * minus_wm1_of_neg_exp(s);
    worst_identity = std::max(worst_identity, static_cast<double>(std::abs(c - c_identity) / c_identity));
  }
  return {at_most(2, "c*(a;y) closed form vs y e^{rho h_numeric/gamma}, a/y in [1e-6, 1e6]", worst, 1e-9),
          at_most(2, "identity c* = -y W_{-1}(f) (extended-precision W)", worst_identity, 1e-13)};
}

std::vector<CheckResult> jacobian(const ModelParams& params) {
  const ModelParams p0 = with_r(params, 0.0);
  const ScalarField c_of = [&](double a, double y) {
    ModelParams q = p0;
    q.y = y;
    return consumption_now_r0(q, a);
  };
  double worst_fd = 0.0;
  double worst_euler = 0.0;
  double min_entry = std::numeric_limits<double>::infinity();
  for (const double ratio : log_space(1e-3, 1e3, 61)) {
    const double a = ratio * p0.y;
    const Jacobian j = jacobian_closed(p0, a);
    const Gradient2 fd = fd_gradient(c_of, a, p0.y, fd_step_first(a), fd_step_first(p0.y));
    worst_fd = std::max({worst_fd, rel_err(j.dc_da, fd.d_da), rel_err(j.dc_dy, fd.d_dy)});
    min_entry = std::min({min_entry, j.dc_da, j.dc_dy});
    const double c = consumption_now_r0(p0, a);
    worst_euler = std::max(worst_euler, rel_err(a * j.dc_da + p0.y * j.dc_dy, c));
  }
  const double b = p0.rho / p0.gamma;
  const double mpc_far = jacobian_closed(p0, 1e8 * p0.y).dc_da;
  return {at_most(3, "Jacobian closed form vs Richardson FD, a/y in [1e-3, 1e3]", worst_fd, 1e-6),
          holds(3, "Jacobian entries strictly positive (min entry)", min_entry > 0, min_entry),
          at_most(3, "Euler identity a c_a + y c_y = c", worst_euler, 1e-10),
          at_most(3, "asymptotic MPC |c_a(1e8 y) - rho/gamma|", std::abs(mpc_far - b), 1e-4)};
}

std::vector<CheckResult> hessian(const ModelParams& params) {
  const ModelParams p0 = with_r(params, 0.0);
  const ScalarField c_of = [&](double a, double y) {
    ModelParams q = p0;
    q.y = y;
    return consumption_now_r0(q, a);
  };
  double worst_fd = 0.0;
  double worst_det = 0.0;
  bool signs = true;
  for (const double ratio : log_space(1e-3, 1e3, 61)) {
    const double a = ratio * p0.y;
    const Hessian h = hessian_closed(p0, a);
    const Hessian2 fd = fd_hessian(c_of, a, p0.y, fd_step_second(a), fd_step_second(p0.y));
    worst_fd = std::max({worst_fd, rel_err(h.d2c_da2, fd.d2_aa), rel_err(h.d2c_dady, fd.d2_ay),
                         rel_err(h.d2c_dy2, fd.d2_yy)});
    signs = signs && h.d2c_da2 < 0 && h.d2c_dady > 0 && h.d2c_dy2 < 0;
    worst_det = std::max(worst_det, std::abs(h.determinant()) / (h.d2c_dady * h.d2c_dady));
  }

  // Supermodularity by finite cross-differences on a 50 x 50 (a, y) grid.
  double min_cross = std::numeric_limits<double>::infinity();
  for (const double a : log_space(1e-3 * p0.y, 1e3 * p0.y, 50)) {
    for (const double y : log_space(0.1 * p0.y, 10 * p0.y, 50)) {
      const double h = 0.01 * a;
      const double k = 0.01 * y;
      const double cross = c_of(a + h, y + k) - c_of(a + h, y) - c_of(a, y + k) + c_of(a, y);
      min_cross = std::min(min_cross, cross / (h * k));
    }
  }
  return {at_most(4, "Hessian closed form vs second-order FD", worst_fd, 1e-4),
          holds(4, "Hessian sign pattern (-, +, -) on the grid", signs, signs ? 1.0 : 0.0),
          at_most(4, "Hessian determinant |det| / c_ay^2", worst_det, 1e-12),
          holds(4, "FD cross-difference > 0 on 50x50 (a, y) grid (min scaled value)", min_cross > 0, min_cross)};
}

std::vector<CheckResult> feasibility(const ModelParams& params) {
  const auto start = Clock::now();
  const ModelParams p0 = with_r(params, 0.0);
  const double a0 = 3.0;
  const double T = h_closed_r0(p0, a0).T;
  const AssetPath path = simulate_assets(p0, a0, T / 1e4);
  const double terminal = std::abs(path.assets_at(T)) / a0;
  const double depletion = rel_err(path.depletion_time_observed, T);
  double worst_mid = 0.0;
  for (int j = 1; j <= 10; ++j) {
    const double t = j * T / 11;
    worst_mid = std::max(worst_mid, rel_err(path.assets_at(t), mu(p0, T - t)));
  }
  const double elapsed = seconds_since(start);
  return {at_most(5, "RK4 terminal assets |a(T)|/a0", terminal, 1e-6),
          at_most(5, "observed depletion time vs h(a0), relative", depletion, 1e-5),
          at_most(5, "a(t) = mu(T - t) at 10 interior checkpoints, relative", worst_mid, 1e-6),
          holds(5, "path feasible: min a(t) >= -1e-12 a0", path.min_assets() >= -1e-12 * a0, path.min_assets()),
          at_most(5, "simulation runtime [s]", elapsed, 1.0)};
}

std::vector<CheckResult> value_bound(const ModelParams& params) {
  std::vector<CheckResult> out;
  for (const ModelParams& p : {with_r(params, 0.0), params}) {
    double min_margin = std::numeric_limits<double>::infinity();
    for (const double m : {0.1, 1.0, 3.0, 10.0, 100.0}) {
      const double a0 = m * p.y;
      min_margin = std::min(min_margin, value_upper_bound(p, a0) - pdv_utility(p, a0));
    }
    const std::string tag = " (r=" + cli::format_double(p.r) + ")";
    out.push_back(holds(6, "pdv_utility < u(rho a + y)/rho, min margin" + tag, min_margin > 0, min_margin));
    const PerturbationReport rep = perturbation_check(p, 3.0);
    double best_rival = -std::numeric_limits<double>::infinity();
    for (const double v : rep.perturbed) best_rival = std::max(best_rival, v);
    const double margin = rep.optimal - best_rival;
    out.push_back(holds(6, "closed-form path beats 10 perturbed feasible paths, margin" + tag,
                        margin > 0 && rep.perturbed.size() == 10, margin));
  }
  return out;
}

std::vector<CheckResult> small_r_approximation(const ModelParams& params) {
  std::vector<double> grid;
  for (const double ratio : lin_space(0.0, 100.0, 401)) grid.push_back(ratio * params.y);
  const std::vector<double> rs{0.0, 0.02, 0.01, 0.005};
  const auto rows = approximation_error_report(params, rs, grid);

  double gap_at_zero = 0.0;
  for (const double r : rs) {
    const ModelParams p = with_r(params, r);
    gap_at_zero = std::max(gap_at_zero, std::abs(consumption_approx_small_r(p, 0.0, 0.0) - consumption_path(p, 0.0, 0.0)));
  }
  const double ratio_hi = rows[1].max_rel_gap / rows[2].max_rel_gap;
  const double ratio_lo = rows[2].max_rel_gap / rows[3].max_rel_gap;
  std::ostringstream note;
  note << "max gaps: r=0.02 " << rows[1].max_rel_gap << ", r=0.01 " << rows[2].max_rel_gap << ", r=0.005 "
       << rows[3].max_rel_gap;
  return {holds(7, "r=0 row identically zero (max gap)", rows[0].max_rel_gap == 0.0, rows[0].max_rel_gap),
          holds(7, "max-gap ratio r=0.02 / r=0.01 in [1.5, 3]", ratio_hi >= 1.5 && ratio_hi <= 3, ratio_hi,
                note.str()),
          holds(7, "max-gap ratio r=0.01 / r=0.005 in [1.5, 3]", ratio_lo >= 1.5 && ratio_lo <= 3, ratio_lo),
          holds(7, "gap at a=0 exactly zero for every r", gap_at_zero == 0.0, gap_at_zero)};
}

std::vector<CheckResult> discrete_model(const ModelParams& params, const Options& options) {
  std::vector<CheckResult> out;
  const KnotSequence knots = mu_discrete(params, 1.0, 60);
  bool increasing = knots[0].mu == 0.0;
  for (std::size_t k = 1; k < knots.size(); ++k) increasing = increasing && knots[k].mu > knots[k - 1].mu;
  out.push_back(holds(8, "mu_discrete knots (delta=1) start at 0 and strictly increase", increasing,
                      knots[1].mu));

  const double a_max = 10 * params.y;
  if (options.level == Level::full) {
    const auto start = Clock::now();
    const std::vector<double> grid = make_asset_grid(2000, a_max, params.y);
    const DpSolution dp = grid_dp(params, 1.0, grid);
    const double elapsed = seconds_since(start);
    const PiecewiseLinearPolicy policy = discrete_policy(params, 1.0, a_max);
    double gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(policy(grid[i]) - dp.policy[i]));
    out.push_back(at_most(8, "discrete_policy vs grid_dp (2000 nodes, delta=1), sup-norm / y", gap / params.y, 2e-3,
                          "value iterations: " + std::to_string(dp.iterations)));
    out.push_back(at_most(8, "grid_dp runtime [s]", elapsed, 120.0));
  }

  const ModelParams p0 = with_r(params, 0.0);
  std::vector<double> gaps;
  const std::vector<double> eval = lin_space(0.0, a_max, 3001);
  for (const double delta : {0.5, 0.1, 0.02}) {
    const PiecewiseLinearPolicy policy = discrete_policy(p0, delta, a_max);
    double gap = 0.0;
    for (const double a : eval) gap = std::max(gap, std::abs(policy(a) - consumption_now_r0(p0, a)));
    gaps.push_back(gap);
  }
  std::ostringstream note;
  note << "sup gaps: " << gaps[0] << ", " << gaps[1] << ", " << gaps[2];
  out.push_back(holds(8, "gap to r=0 closed form decreases for delta in {0.5, 0.1, 0.02} (last gap)",
                      gaps[0] > gaps[1] && gaps[1] > gaps[2], gaps[2], note.str()));
  return out;
}

std::vector<CheckResult> figures(const ModelParams& params) {
  cli::SweepSpec spec;
  spec.a_min = 0.0;
  spec.a_max = 10 * params.y;
  spec.n_points = 201;
  spec.normalize_by_income = true;

  std::stringstream csv1;
  cli::write_csv(csv1, cli::figure1_table(params, spec, 1.0));
  const cli::CsvTable fig1 = cli::parse_csv(csv1);
  const auto& first = fig1.rows.front();
  const double c_disc = first[fig1.column("c_discrete_over_y")];
  const double c_unc = first[fig1.column("c_unconstrained_over_y")];
  const double gap = c_unc - c_disc;

  std::stringstream csv2;
  cli::write_csv(csv2, cli::figure2_table(params, spec));
  const cli::CsvTable fig2 = cli::parse_csv(csv2);
  const std::size_t ca = fig2.column("c_closed_approx_over_y");
  const std::size_t cn = fig2.column("c_numeric_over_y");
  double fig_gap = 0.0;
  for (const auto& row : fig2.rows) fig_gap = std::max(fig_gap, std::abs(row[ca] - row[cn]) / row[cn]);

  std::vector<double> grid;
  for (const double ratio : lin_space(0.0, 100.0, 401)) grid.push_back(ratio * params.y);
  const std::vector<double> r_fig{params.r};
  const double reported = approximation_error_report(params, r_fig, grid).front().max_rel_gap;

  return {holds(9, "figure 1: constrained below unconstrained at a=0, gap / y >= 0.10", first[0] == 0.0 && gap >= 0.10,
                gap),
          at_most(9, "figure 2: max relative gap between curves vs small-r report", fig_gap, reported)};
}

std::vector<CheckResult> run_all(const ModelParams& params, const Options& options) {
  validate(params);
  std::vector<CheckResult> all;
  const auto append = [&](std::vector<CheckResult> part) {
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  };
  append(lambert_kernel(options));
  append(closed_form_vs_numeric(params));
  append(jacobian(params));
  append(hessian(params));
  append(feasibility(params));
  append(value_bound(params));
  append(small_r_approximation(params));
  append(discrete_model(params, options));
  append(figures(params));
  return all;
}

std::string format(const CheckResult& r) {
  char buf[64];
  std::ostringstream line;
  line << (r.passed ? "PASS" : "FAIL") << "  C" << r.criterion << "  " << r.name << ": measured=";
  std::snprintf(buf, sizeof buf, "%.3e", r.measured);
  line << buf;
  if (r.tolerance != 0.0) {
    std::snprintf(buf, sizeof buf, "%.3e", r.tolerance);
    line << " tolerance=" << buf;
  }
  if (!r.note.empty()) line << "  [" << r.note << "]";
  return line.str();
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace ifp::checks
