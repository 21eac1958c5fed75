#pragma once

// Asset-depletion map mu(T): the initial assets a consumer runs down in
// exactly T time units. Its inverse h(a; y) is the depletion time.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "ifp/model.hpp"

namespace ifp {

enum class DepletionMethod { exact_r0, approx_small_r, numeric };

std::string_view to_string(DepletionMethod method);

struct DepletionTime {
  double T = 0.0;
  DepletionMethod method = DepletionMethod::numeric;
};

/// Below this interest rate mu() uses the r = 0 form.
inline constexpr double kRSwitch = 1e-12;

/// e^x - 1 - x without cancellation near zero.
double expm1mx(double x);

/// Continuous-time depletion map; mu(0) = 0, strictly increasing and convex.
double mu(const ModelParams& params, double T);

/// d mu / dT; zero at T = 0 and positive afterwards.
double mu_prime(const ModelParams& params, double T);

/// Inverts mu by safeguarded Newton. Valid for every admissible r.
DepletionTime h_numeric(const ModelParams& params, double a);

/// Exact inverse through W_{-1}; requires r == 0.
DepletionTime h_closed_r0(const ModelParams& params, double a);

/// Lambert-W approximation of the inverse, accurate to O(r).
DepletionTime h_approx_small_r(const ModelParams& params, double a);

/// How mu_discrete() links consecutive knots.
enum class KnotRule {
  /// mu_k + (dy - mu_{k-1})/(1 + r d) = G^{-k/gamma} d y, verbatim.
  implicit_sequence,
  /// (1 + r d) mu_k = mu_{k-1} - d y + G^{-k/gamma} d y, which is what the
  /// budget a' = (1 + r d) a + d (y - c) implies. Same as above when r = 0.
  budget_consistent,
};

struct Knot {
  double T = 0.0;            ///< k * delta
  double mu = 0.0;           ///< assets depleted in k periods
  double consumption = 0.0;  ///< optimal consumption flow at assets mu
};

/// Discrete-time depletion knots for k = 0..n, with G = (1 + r d)/(1 + rho d).
class KnotSequence {
 public:
  KnotSequence(double delta, std::vector<Knot> knots) : delta_(delta), knots_(std::move(knots)) {}

  double delta() const { return delta_; }
  const std::vector<Knot>& knots() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  const Knot& operator[](std::size_t k) const { return knots_[k]; }

  /// Piecewise-linear interpolation of mu at time T within the knot range.
  double mu_at(double T) const;

 private:
  double delta_;
  std::vector<Knot> knots_;
};

KnotSequence mu_discrete(const ModelParams& params, double delta, int n_knots,
                         KnotRule rule = KnotRule::implicit_sequence);

}  // namespace ifp
