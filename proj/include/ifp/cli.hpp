#pragma once

// Command-line front end: sweeps, figure data and CSV emission.

#include <iosfwd>
#include <string>
#include <vector>

#include "ifp/model.hpp"

namespace ifp::cli {

enum class Spacing { linear, log };

struct SweepSpec {
  double a_min = 0.0;
  double a_max = 30.0;
  int n_points = 100;
  Spacing spacing = Spacing::linear;
  bool normalize_by_income = false;

  /// Throws ValidationError if a_min < 0, a_max <= a_min, n_points < 2, or
  /// a log sweep starts at zero.
  void validate() const;
  std::vector<double> grid() const;
};

enum class SweepOutput { c, T, jacobian, hessian };

SweepOutput parse_sweep_output(const std::string& name);

/// Numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

/// Comma separated, header first, LF line endings.
void write_csv(std::ostream& out, const CsvTable& table);
CsvTable parse_csv(std::istream& in);

/// Columns a_over_y, c_discrete_over_y, c_unconstrained_over_y, knot_flag.
/// Rows are the sweep points merged with every discrete-policy knot in the
/// sweep range (knot_flag = 1). Requires r > 0.
CsvTable figure1_table(const ModelParams& params, const SweepSpec& sweep, double delta);

/// Columns a_over_y, c_closed_approx_over_y, c_numeric_over_y.
CsvTable figure2_table(const ModelParams& params, const SweepSpec& sweep);

/// One row per sweep point; columns a (or a_over_y) then the requested
/// outputs in order. jacobian and hessian need r == 0 and a_min > 0.
CsvTable sweep_table(const ModelParams& params, const SweepSpec& sweep, const std::vector<SweepOutput>& outputs);

/// Runs the command line; returns the process exit code
/// (0 success, 1 failed check, 2 usage or validation error).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifp::cli
