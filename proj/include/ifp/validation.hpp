#pragma once

// Independent numerical oracles used to falsify the closed forms:
// budget-equation simulation, discounted-utility quadrature, finite
// differences, and value iteration on the discrete-time model.

#include <functional>
#include <span>
#include <vector>

#include "ifp/model.hpp"

namespace ifp {

// ---------------------------------------------------------------------------
// Budget simulation

struct PathSample {
  double t = 0.0;
  double a = 0.0;
  double c = 0.0;
  double dadt = 0.0;
};

/// Asset trajectory under the closed-form consumption time path.
struct AssetPath {
  double dt = 0.0;                       ///< step actually used (divides T)
  double depletion_time_closed = 0.0;    ///< T the policy was built from
  double depletion_time_observed = 0.0;  ///< first time a(t) <= depletion_tolerance
  double depletion_tolerance = 0.0;
  std::vector<PathSample> samples;

  /// Cubic Hermite interpolation of a(t) between samples.
  double assets_at(double t) const;
  double min_assets() const;
};

/// Integrates da/dt = r a + y - c*(t) with classical RK4 from a0 until
/// t = T + 1. The step is shrunk so that T falls on a step boundary; dt must
/// not exceed T/100.
AssetPath simulate_assets(const ModelParams& params, double a0, double dt);

// ---------------------------------------------------------------------------
// Discounted utility

/// int_0^T e^{-rho t} u(c(t)) dt + e^{-rho T} u(y)/rho for a plan that
/// consumes c(t) up to T and y afterwards.
double discounted_utility(const ModelParams& params, double T, const std::function<double(double)>& c_head,
                          double tol = 1e-10, int max_depth = 50);

/// Present discounted utility of the optimal plan from assets a0.
double pdv_utility(const ModelParams& params, double a0, double tol = 1e-10, int max_depth = 50);

struct PerturbationReport {
  double optimal = 0.0;
  std::vector<double> frequencies;
  std::vector<double> perturbed;  ///< one discounted utility per frequency
};

/// Compares the optimal plan with plans c*(t)(1 + eps sin(omega t)) on [0, T],
/// rescaled so that int_0^T e^{-rt} c(t) dt matches the optimal plan's.
PerturbationReport perturbation_check(const ModelParams& params, double a0, double eps = 0.05,
                                      int n_frequencies = 10);

// ---------------------------------------------------------------------------
// Finite differences

using ScalarField = std::function<double(double a, double y)>;

struct Gradient2 {
  double d_da = 0.0;
  double d_dy = 0.0;
};

struct Hessian2 {
  double d2_aa = 0.0;
  double d2_ay = 0.0;
  double d2_yy = 0.0;
};

/// Central differences with steps (h_a, h_y), Richardson-extrapolated once.
Gradient2 fd_gradient(const ScalarField& fn, double a, double y, double h_a, double h_y);

/// Second-order central stencils, Richardson-extrapolated once.
Hessian2 fd_hessian(const ScalarField& fn, double a, double y, double h_a, double h_y);

/// epsilon^{1/3} * scale, the usual step for first derivatives.
double fd_step_first(double scale);
/// epsilon^{1/6} * scale, matched to the extrapolated second-order stencil.
double fd_step_second(double scale);

// ---------------------------------------------------------------------------
// Discrete-time dynamic programming

struct DpSolution {
  std::vector<double> asset_grid;
  std::vector<double> policy;  ///< consumption flow per node
  std::vector<double> value;
  int iterations = 0;
  double sup_norm_residual = 0.0;
};

/// Asset grid on [0, a_max]: uniform below y, geometric above, with nodes
/// below y five times denser on average.
std::vector<double> make_asset_grid(int n, double a_max, double y);

/// Value iteration on V(a) = max_c d u(c) + V(a')/(1 + rho d) with
/// a' = (1 + r d) a + d (y - c) >= 0. Golden-section search over c,
/// monotone cubic interpolation of V between nodes.
DpSolution grid_dp(const ModelParams& params, double delta, std::span<const double> a_grid,
                   int max_iterations = 100000);

// ---------------------------------------------------------------------------
// Small-r approximation error

struct ApproximationErrorRow {
  double r = 0.0;
  double max_rel_gap = 0.0;
  double mean_rel_gap = 0.0;
  double a_at_max = 0.0;
};

/// For each r, relative gap between consumption_approx_small_r and the
/// reference solution (exact at r = 0, numeric inversion otherwise).
std::vector<ApproximationErrorRow> approximation_error_report(const ModelParams& params_base,
                                                              std::span<const double> r_list,
                                                              std::span<const double> a_grid);

}  // namespace ifp
