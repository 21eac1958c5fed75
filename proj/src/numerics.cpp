#include "ifp/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "ifp/errors.hpp"

namespace ifp::numerics {

namespace {

struct SimpsonPanel {
  double lo, mid, hi;
  double f_lo, f_mid, f_hi;
  double whole;
};

double simpson(double lo, double hi, double f_lo, double f_mid, double f_hi) {
  return (hi - lo) / 6 * (f_lo + 4 * f_mid + f_hi);
}

double simpson_recurse(const std::function<double(double)>& f, const SimpsonPanel& p, double tol,
                       int depth, int forced_splits) {
  const double left_mid = 0.5 * (p.lo + p.mid);
  const double right_mid = 0.5 * (p.mid + p.hi);
  const double f_lm = f(left_mid);
  const double f_rm = f(right_mid);
  const double left = simpson(p.lo, p.mid, p.f_lo, f_lm, p.f_mid);
  const double right = simpson(p.mid, p.hi, p.f_mid, f_rm, p.f_hi);
  const double delta = left + right - p.whole;
  if (forced_splits <= 0 && (depth <= 0 || std::abs(delta) <= 15 * tol)) return left + right + delta / 15;
  return simpson_recurse(f, {p.lo, left_mid, p.mid, p.f_lo, f_lm, p.f_mid, left}, tol / 2, depth - 1,
                         forced_splits - 1) +
         simpson_recurse(f, {p.mid, right_mid, p.hi, p.f_mid, f_rm, p.f_hi, right}, tol / 2, depth - 1,
                         forced_splits - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth) {
  if (hi == lo) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double f_lo = f(lo);
  const double f_mid = f(mid);
  const double f_hi = f(hi);
  // A few unconditional splits keep a coincidentally flat first estimate from
  // being accepted.
  const int forced = std::min(4, max_depth);
  return simpson_recurse(f, {lo, mid, hi, f_lo, f_mid, f_hi, simpson(lo, hi, f_lo, f_mid, f_hi)}, tol,
                         max_depth, forced);
}

GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double x_tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > x_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
}

MonotoneCubic::MonotoneCubic(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), slope_(x.size()) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("MonotoneCubic: need matching arrays of size >= 2");
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    if (!(h > 0)) throw DomainError("MonotoneCubic: abscissae must be strictly increasing");
    secant[i] = (y_[i + 1] - y_[i]) / h;
  }
  slope_[0] = secant[0];
  slope_[n - 1] = secant[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (secant[i - 1] * secant[i] <= 0) {
      slope_[i] = 0.0;
    } else {
      // Weighted harmonic mean (Fritsch-Butland), which satisfies the
      // Fritsch-Carlson monotonicity bounds.
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double w0 = 2 * h1 + h0;
      const double w1 = h1 + 2 * h0;
      slope_[i] = (w0 + w1) / (w0 / secant[i - 1] + w1 / secant[i]);
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front() + slope_.front() * (x - x_.front());
  if (x >= x_.back()) return y_.back() + slope_.back() * (x - x_.back());
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
         (t3 - t2) * h * slope_[i + 1];
}

}  // namespace ifp::numerics
