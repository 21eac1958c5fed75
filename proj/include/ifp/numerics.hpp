#pragma once

// Generic one-dimensional numerical tools backing the validation oracles.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ifp::numerics {

/// Adaptive Simpson quadrature with Richardson correction. Each subinterval
/// is accepted when its local error estimate is below its share of tol or
/// max_depth is reached.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth = 50);

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};

/// Maximizes a unimodal function on [lo, hi] until the bracket is narrower
/// than x_tol.
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double x_tol);

/// Shape-preserving piecewise cubic (Fritsch-Carlson) through (x_i, y_i).
/// Monotone data produce a monotone interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic(std::span<const double> x, std::span<const double> y);

  /// Evaluates the interpolant; outside the nodes it extends linearly.
  double operator()(double x) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

/// One classical fourth-order Runge-Kutta step for dy/dt = f(t, y).
inline double rk4_step(const std::function<double(double, double)>& f, double t, double y, double h) {
  const double k1 = f(t, y);
  const double k2 = f(t + h / 2, y + h / 2 * k1);
  const double k3 = f(t + h / 2, y + h / 2 * k2);
  const double k4 = f(t + h, y + h * k3);
  return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace ifp::numerics
