#include "ifp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ifp/checks.hpp"
#include "ifp/consumption.hpp"
#include "ifp/depletion.hpp"
#include "ifp/errors.hpp"

namespace ifp::cli {

void SweepSpec::validate() const {
  if (!std::isfinite(a_min) || !std::isfinite(a_max)) throw ValidationError("sweep bounds must be finite");
  if (a_min < 0) throw ValidationError("sweep requires a_min >= 0");
  if (!(a_max > a_min)) throw ValidationError("sweep requires a_max > a_min");
  if (n_points < 2) throw ValidationError("sweep requires n_points >= 2");
  if (spacing == Spacing::log && !(a_min > 0)) throw ValidationError("log spacing requires a_min > 0");
}

std::vector<double> SweepSpec::grid() const {
  validate();
  std::vector<double> g(static_cast<std::size_t>(n_points));
  const double last = n_points - 1;
  for (int i = 0; i < n_points; ++i) {
    const double s = i / last;
    g[static_cast<std::size_t>(i)] =
        spacing == Spacing::linear ? a_min + s * (a_max - a_min) : a_min * std::pow(a_max / a_min, s);
  }
  g.front() = a_min;
  g.back() = a_max;
  return g;
}

SweepOutput parse_sweep_output(const std::string& name) {
  if (name == "c") return SweepOutput::c;
  if (name == "T") return SweepOutput::T;
  if (name == "jacobian") return SweepOutput::jacobian;
  if (name == "hessian") return SweepOutput::hessian;
  throw ValidationError("unknown sweep output '" + name + "' (expected c, T, jacobian or hessian)");
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("no CSV column named " + name);
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) return table;
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream rs(line);
    for (std::string cell; std::getline(rs, cell, ',');) row.push_back(std::strtod(cell.c_str(), nullptr));
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable figure1_table(const ModelParams& params, const SweepSpec& sweep, double delta) {
  validate(params);
  sweep.validate();
  if (!(params.r > 0)) throw ValidationError("figure 1 requires r > 0 for the unconstrained overlay");
  if (!(delta > 0)) throw ValidationError("figure 1 requires delta > 0");
  const PiecewiseLinearPolicy policy = discrete_policy(params, delta, sweep.a_max);

  std::vector<std::pair<double, bool>> points;
  for (const double a : sweep.grid()) points.emplace_back(a, false);
  for (const Knot& k : policy.knots()) {
    if (k.mu >= sweep.a_min && k.mu <= sweep.a_max) points.emplace_back(k.mu, true);
  }
  std::sort(points.begin(), points.end());
  // A sweep point that coincides with a knot is reported once, flagged.
  std::vector<std::pair<double, bool>> merged;
  for (const auto& p : points) {
    if (!merged.empty() && merged.back().first == p.first) {
      merged.back().second = merged.back().second || p.second;
    } else {
      merged.push_back(p);
    }
  }

  const double y = params.y;
  CsvTable table{{"a_over_y", "c_discrete_over_y", "c_unconstrained_over_y", "knot_flag"}, {}};
  for (const auto& [a, knot] : merged) {
    table.rows.push_back({a / y, policy(a) / y, consumption_unconstrained(params, a) / y, knot ? 1.0 : 0.0});
  }
  return table;
}

CsvTable figure2_table(const ModelParams& params, const SweepSpec& sweep) {
  validate(params);
  sweep.validate();
  const double y = params.y;
  CsvTable table{{"a_over_y", "c_closed_approx_over_y", "c_numeric_over_y"}, {}};
  for (const double a : sweep.grid()) {
    table.rows.push_back({a / y, consumption_approx_small_r(params, a, 0.0) / y, consumption_path(params, a, 0.0) / y});
  }
  return table;
}

CsvTable sweep_table(const ModelParams& params, const SweepSpec& sweep, const std::vector<SweepOutput>& outputs) {
  validate(params);
  sweep.validate();
  const bool needs_closed = std::any_of(outputs.begin(), outputs.end(), [](SweepOutput o) {
    return o == SweepOutput::jacobian || o == SweepOutput::hessian;
  });
  if (needs_closed && params.r != 0) throw ValidationError("jacobian/hessian outputs require r = 0");
  if (needs_closed && !(sweep.a_min > 0)) throw ValidationError("jacobian/hessian outputs require a_min > 0");

  const bool norm = sweep.normalize_by_income;
  const double scale = norm ? params.y : 1.0;
  CsvTable table;
  table.header.push_back(norm ? "a_over_y" : "a");
  for (const SweepOutput o : outputs) {
    switch (o) {
      case SweepOutput::c:
        table.header.push_back(norm ? "c_over_y" : "c");
        break;
      case SweepOutput::T:
        table.header.push_back("T");
        break;
      case SweepOutput::jacobian:
        table.header.insert(table.header.end(), {"dc_da", "dc_dy"});
        break;
      case SweepOutput::hessian:
        table.header.insert(table.header.end(), {"d2c_da2", "d2c_dady", "d2c_dy2"});
        break;
    }
  }
  for (const double a : sweep.grid()) {
    std::vector<double> row{a / scale};
    for (const SweepOutput o : outputs) {
      switch (o) {
        case SweepOutput::c:
          row.push_back(consumption_path(params, a, 0.0) / scale);
          break;
        case SweepOutput::T:
          row.push_back(depletion_time(params, a).T);
          break;
        case SweepOutput::jacobian: {
          const Jacobian j = jacobian_closed(params, a);
          row.insert(row.end(), {j.dc_da, j.dc_dy});
          break;
        }
        case SweepOutput::hessian: {
          const Hessian h = hessian_closed(params, a);
          row.insert(row.end(), {h.d2c_da2, h.d2c_dady, h.d2c_dy2});
          break;
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Computes the table first so that a failure never leaves a partial file.
int emit_table(const CsvTable& table, const std::string& path, std::ostream& out, std::ostream& err) {
  if (path.empty() || path == "-") {
    write_csv(out, table);
    return kExitOk;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file: " << path << '\n';
    return kExitUsage;
  }
  write_csv(file, table);
  file.flush();
  if (!file) {
    err << "error: failed writing output file: " << path << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

void print_key(std::ostream& out, const std::string& key, double value) {
  out << key << '=' << format_double(value) << '\n';
}

int cmd_eval(const ModelParams& params, double a, double t, std::ostream& out) {
  validate(params);
  if (!(a >= 0)) throw ValidationError("eval requires a >= 0");
  if (!(t >= 0)) throw ValidationError("eval requires t >= 0");
  const DepletionTime best = depletion_time(params, a);
  const DepletionTime numeric = h_numeric(params, a);
  const DepletionTime approx = h_approx_small_r(params, a);

  print_key(out, "a", a);
  print_key(out, "t", t);
  print_key(out, "T", best.T);
  out << "T_method=" << to_string(best.method) << '\n';
  print_key(out, "T_numeric", numeric.T);
  if (params.r == 0) print_key(out, "T_exact_r0", h_closed_r0(params, a).T);
  print_key(out, "T_approx_small_r", approx.T);
  print_key(out, "c", consumption_given_depletion(params, best.T, t));
  print_key(out, "c_approx_small_r", consumption_given_depletion(params, approx.T, t));
  if (params.r == 0 && a > 0) {
    const ConsumptionDerivatives d = derivatives_closed(params, a);
    print_key(out, "dc_da", d.dc_da);
    print_key(out, "dc_dy", d.dc_dy);
    print_key(out, "d2c_da2", d.d2c_da2);
    print_key(out, "d2c_dady", d.d2c_dady);
    print_key(out, "d2c_dy2", d.d2c_dy2);
  }
  return kExitOk;
}

Spacing parse_spacing(const std::string& s) {
  if (s == "linear") return Spacing::linear;
  if (s == "log") return Spacing::log;
  throw ValidationError("unknown spacing '" + s + "' (expected linear or log)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form consumption functions for the deterministic income-fluctuation problem", "ifp"};
  app.require_subcommand(1);
  app.fallthrough();

  ModelParams params = kFigureParams;
  app.add_option("--rho", params.rho, "subjective discount rate")->capture_default_str();
  app.add_option("--r", params.r, "net interest rate")->capture_default_str();
  app.add_option("--gamma", params.gamma, "relative risk aversion")->capture_default_str();
  app.add_option("--y", params.y, "permanent income")->capture_default_str();

  double a = 0.0;
  double t = 0.0;
  auto* eval = app.add_subcommand("eval", "evaluate depletion time, consumption and derivatives at one point");
  eval->add_option("--a", a, "initial assets")->required();
  eval->add_option("--t", t, "calendar time")->capture_default_str();

  double a_min = 0.0;
  double a_max = std::nan("");
  int n_points = 100;
  std::string spacing = "linear";
  std::string out_path;
  const auto add_sweep_options = [&](CLI::App* cmd) {
    cmd->add_option("--a-min", a_min, "lowest asset level")->capture_default_str();
    cmd->add_option("--a-max", a_max, "highest asset level (default 10 y)");
    cmd->add_option("--n", n_points, "number of grid points")->capture_default_str();
    cmd->add_option("--spacing", spacing, "linear or log")->capture_default_str();
    cmd->add_option("--out", out_path, "output CSV path (default stdout)");
  };

  std::vector<std::string> outputs;
  auto* sweep = app.add_subcommand("sweep", "tabulate c, T, jacobian or hessian over an asset grid");
  add_sweep_options(sweep);
  sweep->add_option("outputs", outputs, "any of: c T jacobian hessian (default c)");

  int which = 0;
  double delta = 1.0;
  auto* figure = app.add_subcommand("figure", "emit figure data as CSV");
  add_sweep_options(figure);
  figure->add_option("--which", which, "figure number (1 or 2)")->required();
  figure->add_option("--delta", delta, "period length for the discrete-time policy")->capture_default_str();

  std::string level = "quick";
  checks::Options check_options;
  auto* check = app.add_subcommand("check", "run the verification suites");
  check->add_option("--level", level, "quick or full")->capture_default_str();
  check->add_option("--lambert-tol", check_options.lambert_residual_tol,
                    "override the Lambert residual tolerance (testing the failure path)");

  std::vector<const char*> argv{"ifp"};
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    validate(params);
    if (*eval) return cmd_eval(params, a, t, out);

    SweepSpec spec;
    spec.a_min = a_min;
    spec.a_max = std::isnan(a_max) ? 10 * params.y : a_max;
    spec.n_points = n_points;
    spec.spacing = parse_spacing(spacing);

    if (*sweep) {
      std::vector<SweepOutput> wanted;
      for (const std::string& o : outputs) wanted.push_back(parse_sweep_output(o));
      if (wanted.empty()) wanted.push_back(SweepOutput::c);
      return emit_table(sweep_table(params, spec, wanted), out_path, out, err);
    }
    if (*figure) {
      spec.normalize_by_income = true;
      if (which == 1) return emit_table(figure1_table(params, spec, delta), out_path, out, err);
      if (which == 2) return emit_table(figure2_table(params, spec), out_path, out, err);
      throw ValidationError("--which must be 1 or 2");
    }
    if (*check) {
      if (level == "quick") {
        check_options.level = checks::Level::quick;
      } else if (level == "full") {
        check_options.level = checks::Level::full;
      } else {
        throw ValidationError("unknown check level '" + level + "' (expected quick or full)");
      }
      const auto results = checks::run_all(params, check_options);
      for (const auto& r : results) out << checks::format(r) << '\n';
      const bool ok = checks::all_passed(results);
      out << (ok ? "all checks passed" : "some checks FAILED") << '\n';
      return ok ? kExitOk : kExitCheckFailed;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ifp::cli
