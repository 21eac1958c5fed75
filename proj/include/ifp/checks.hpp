#pragma once

// Oracle-equivalence and invariant suites behind `ifp check` and the
// acceptance test binary. Each criterion yields one or more result lines.

#include <iosfwd>
#include <string>
#include <vector>

#include "ifp/model.hpp"

namespace ifp::checks {

enum class Level { quick, full };

struct Options {
  Level level = Level::quick;
  /// Relative residual bound for the Lambert kernel.
  double lambert_residual_tol = 1e-13;
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

std::vector<CheckResult> lambert_kernel(const Options& options);
std::vector<CheckResult> closed_form_vs_numeric(const ModelParams& params);
std::vector<CheckResult> jacobian(const ModelParams& params);
std::vector<CheckResult> hessian(const ModelParams& params);
std::vector<CheckResult> feasibility(const ModelParams& params);
std::vector<CheckResult> value_bound(const ModelParams& params);
std::vector<CheckResult> small_r_approximation(const ModelParams& params);
/// The value-iteration comparison only runs at Level::full.
std::vector<CheckResult> discrete_model(const ModelParams& params, const Options& options);
std::vector<CheckResult> figures(const ModelParams& params);

/// Runs criteria 1-9 in order.
std::vector<CheckResult> run_all(const ModelParams& params, const Options& options);

/// "PASS  C3 jacobian vs FD: measured=... tolerance=..." style line.
std::string format(const CheckResult& result);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace ifp::checks
