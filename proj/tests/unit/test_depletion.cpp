#include <cmath>
#include <vector>

#include "doctest.h"
#include "ifp/depletion.hpp"
#include "ifp/errors.hpp"
#include "oracles.hpp"

using ifp::ModelParams;

namespace {

constexpr ModelParams kR0{0.08, 0.0, 0.5, 3.0};
constexpr ModelParams kFig = ifp::kFigureParams;

ModelParams with_r(double r) {
  ModelParams p = kFig;
  p.r = r;
  return p;
}

}  // namespace

TEST_CASE("expm1mx") {
  CHECK(ifp::expm1mx(0.0) == 0.0);
  for (const double x : {-3.0, -0.4, -1e-3, 1e-8, 1e-3, 0.3, 0.49, 0.51, 2.0}) {
    const long double xl = x;
    const long double ref = std::expm1(xl) - xl;
    CHECK(ifp::expm1mx(x) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
  }
}

TEST_CASE("mu reference values") {
  CHECK(ifp::mu(kFig, 0.0) == 0.0);
  CHECK(ifp::mu(kR0, 0.0) == 0.0);
  CHECK(ifp::mu(kR0, 3.23) == doctest::Approx(3.0).epsilon(2e-3));
  CHECK(ifp::mu(kR0, 3.2313503660228116) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(ifp::mu(kFig, 10.0) == doctest::Approx(34.45847638696216).epsilon(1e-14));
  CHECK(ifp::mu(kFig, 10.0) == doctest::Approx(oracle::mu_textbook(kFig, 10.0)).epsilon(1e-13));
}

TEST_CASE("mu matches the textbook form across r and T") {
  for (const double r : {0.0, 0.005, 0.01, 0.05, 0.079}) {
    const ModelParams p = with_r(r);
    for (const double T : {0.5, 1.0, 5.0, 20.0, 60.0}) {
      CHECK(ifp::mu(p, T) == doctest::Approx(oracle::mu_textbook(p, T)).epsilon(1e-9));
    }
  }
}

TEST_CASE("mu is continuous as r goes to zero") {
  // The textbook form divides by r; compare with r = 0 instead.
  for (const double r : {1e-14, 1e-12, 1e-9, 1e-6}) {
    for (const double T : {0.5, 5.0, 60.0}) {
      const double m0 = ifp::mu(kR0, T);
      CHECK(std::abs(ifp::mu(with_r(r), T) - m0) <= 10 * r * (T + 1 / 0.16) * m0 + 1e-15 * m0);
    }
  }
}

TEST_CASE("mu is accurate where the textbook form cancels") {
  // Small T: mu ~ y (rho - r) T^2 / (2 gamma).
  for (const double r : {0.0, 0.01}) {
    const ModelParams p = with_r(r);
    const double T = 1e-7;
    const double leading = p.y * (p.rho - p.r) / p.gamma * T * T / 2;
    CHECK(ifp::mu(p, T) == doctest::Approx(leading).epsilon(1e-6));
  }
}

TEST_CASE("mu_prime") {
  CHECK(ifp::mu_prime(kFig, 0.0) == 0.0);
  CHECK(ifp::mu_prime(kR0, 2.0) == doctest::Approx(3.0 * std::expm1(0.32)).epsilon(1e-14));
  for (const double r : {0.0, 0.005, 0.01}) {
    const ModelParams p = with_r(r);
    for (int i = 0; i <= 40; ++i) {
      const double T = 0.01 * std::pow(5000.0, i / 40.0);
      const double h = 1e-3 * T;
      const double d1 = (ifp::mu(p, T + h) - ifp::mu(p, T - h)) / (2 * h);
      const double d2 = (ifp::mu(p, T + 2 * h) - ifp::mu(p, T - 2 * h)) / (4 * h);
      const double fd = (4 * d1 - d2) / 3;
      CHECK(ifp::mu_prime(p, T) == doctest::Approx(fd).epsilon(1e-8));
      CHECK(ifp::mu_prime(p, T) == doctest::Approx(oracle::mu_prime_textbook(p, T)).epsilon(1e-10));
      CHECK(ifp::mu_prime(p, T) > 0);
    }
  }
}

TEST_CASE("mu solves its ODE") {
  for (const double r : {0.0, 0.005, 0.01}) {
    const ModelParams p = with_r(r);
    for (const double T : {0.1, 1.0, 3.0, 10.0, 30.0}) {
      const double residual = ifp::mu_prime(p, T) + r * ifp::mu(p, T) + p.y -
                              std::exp((p.rho - r) * T / p.gamma) * p.y;
      CHECK(std::abs(residual) <= 1e-9 * p.y);
    }
  }
}

TEST_CASE("mu increasing and convex, h increasing and concave") {
  for (const double r : {0.0, 0.01}) {
    const ModelParams p = with_r(r);
    std::vector<double> m;
    for (int i = 0; i <= 200; ++i) m.push_back(ifp::mu(p, 0.1 * i));
    for (std::size_t i = 1; i + 1 < m.size(); ++i) {
      CHECK(m[i] > m[i - 1]);
      CHECK(m[i + 1] - 2 * m[i] + m[i - 1] > 0);
    }
    std::vector<double> h;
    for (int i = 0; i <= 200; ++i) h.push_back(ifp::h_numeric(p, 0.25 * i).T);
    for (std::size_t i = 1; i + 1 < h.size(); ++i) {
      CHECK(h[i] > h[i - 1]);
      CHECK(h[i + 1] - 2 * h[i] + h[i - 1] < 0);
    }
  }
}

TEST_CASE("h_numeric") {
  CHECK(ifp::h_numeric(kFig, 0.0).T == 0.0);
  CHECK(ifp::h_numeric(kFig, 1.0).method == ifp::DepletionMethod::numeric);
  CHECK(ifp::h_numeric(kFig, ifp::mu(kFig, 7.5)).T == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(ifp::h_numeric(kR0, 3.0).T == doctest::Approx(3.23).epsilon(2e-3));
  CHECK(ifp::h_numeric(kR0, 3.0).T == doctest::Approx(oracle::h_bisect(kR0, 3.0)).epsilon(1e-12));
  for (const double r : {0.0, 0.01, 0.07}) {
    const ModelParams p = with_r(r);
    for (const double a : {1e-9, 1e-3, 0.5, 3.0, 100.0, 1e5, 1e9}) {
      const double T = ifp::h_numeric(p, a).T;
      CHECK(std::abs(ifp::mu(p, T) - a) <= 1e-12 * std::max(a, p.y));
    }
  }
  CHECK_THROWS_AS(ifp::h_numeric(kFig, -1.0), ifp::DomainError);
  CHECK_THROWS_AS(ifp::h_numeric({0.08, 0.08, 0.5, 3.0}, 1.0), ifp::ValidationError);
}

TEST_CASE("h_closed_r0") {
  const auto d0 = ifp::h_closed_r0(kR0, 0.0);
  CHECK(d0.T == 0.0);
  CHECK(d0.method == ifp::DepletionMethod::exact_r0);
  CHECK(ifp::h_closed_r0(kR0, 3.0).T == doctest::Approx(3.2313503660228116).epsilon(1e-14));
  CHECK(ifp::h_closed_r0(kR0, 3.0).T == doctest::Approx(oracle::h_lambert_textbook(kR0, 3.0)).epsilon(1e-11));
  CHECK(-21.75 / 3 - 6.25 * oracle::wm1(-std::exp(-1.16)) == doctest::Approx(3.23).epsilon(2e-3));
  for (const double ratio : {1e-6, 1e-3, 0.1, 1.0, 10.0, 1e3, 1e6}) {
    const double a = ratio * kR0.y;
    CHECK(ifp::h_closed_r0(kR0, a).T == doctest::Approx(ifp::h_numeric(kR0, a).T).epsilon(1e-10));
  }
  CHECK_THROWS_AS(ifp::h_closed_r0(kFig, 1.0), ifp::DomainError);
}

TEST_CASE("h_approx_small_r") {
  for (const double a : {0.0, 0.3, 3.0, 300.0}) {
    CHECK(ifp::h_approx_small_r(kR0, a).T == ifp::h_closed_r0(kR0, a).T);
  }
  CHECK(ifp::h_approx_small_r(kR0, 1.0).method == ifp::DepletionMethod::approx_small_r);
  for (const double r : {0.005, 0.01, 0.05}) CHECK(ifp::h_approx_small_r(with_r(r), 0.0).T == 0.0);
  const double approx = ifp::h_approx_small_r(kFig, 3.0).T;
  const double exact = ifp::h_numeric(kFig, 3.0).T;
  const double gap = std::abs(approx - exact) / exact;
  CHECK(gap > 0);
  CHECK(gap < 0.1);
  // O(r): halving r roughly halves the gap.
  const double half = std::abs(ifp::h_approx_small_r(with_r(0.005), 3.0).T - ifp::h_numeric(with_r(0.005), 3.0).T) /
                      ifp::h_numeric(with_r(0.005), 3.0).T;
  CHECK(gap / half > 1.5);
  CHECK(gap / half < 3.0);
}

TEST_CASE("mu_discrete with the verbatim recursion") {
  const auto knots = ifp::mu_discrete(kFig, 1.0, 40);
  REQUIRE(knots.size() == 41);
  CHECK(knots[0].mu == 0.0);
  CHECK(knots[0].consumption == doctest::Approx(3.0).epsilon(1e-15));
  const double mu1 = 3 * std::pow(1.08 / 1.01, 2) - 3 / 1.01;
  CHECK(knots[1].mu == doctest::Approx(mu1).epsilon(1e-14));
  CHECK(knots[1].mu == doctest::Approx(0.45995491).epsilon(1e-8));
  for (std::size_t k = 1; k < knots.size(); ++k) {
    CHECK(knots[k].mu > knots[k - 1].mu);
    CHECK(knots[k].T == doctest::Approx(static_cast<double>(k)));
    CHECK(knots[k].consumption == doctest::Approx(3.0 * std::pow(1.08 / 1.01, 2.0 * k)).epsilon(1e-13));
  }
}

TEST_CASE("mu_discrete approaches mu as delta shrinks") {
  const auto knots = ifp::mu_discrete(kFig, 1e-4, 20000);
  CHECK(knots[20000].mu == doctest::Approx(ifp::mu(kFig, 2.0)).epsilon(1e-3));
  CHECK(knots.mu_at(2.0) == knots[20000].mu);
  const auto coarse = ifp::mu_discrete(kFig, 0.5, 10);
  CHECK(coarse.mu_at(0.75) == doctest::Approx(0.5 * (coarse[1].mu + coarse[2].mu)));
  CHECK_THROWS_AS(coarse.mu_at(6.0), ifp::DomainError);
}

TEST_CASE("knot rules coincide at r = 0 and differ otherwise") {
  const auto a = ifp::mu_discrete(kR0, 1.0, 20, ifp::KnotRule::implicit_sequence);
  const auto b = ifp::mu_discrete(kR0, 1.0, 20, ifp::KnotRule::budget_consistent);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].mu == doctest::Approx(b[k].mu).epsilon(1e-15));

  const auto c = ifp::mu_discrete(kFig, 1.0, 20, ifp::KnotRule::budget_consistent);
  CHECK(c[1].mu != doctest::Approx(ifp::mu_discrete(kFig, 1.0, 20)[1].mu).epsilon(1e-6));
  // Budget consistency: one period of consumption c_k from assets mu_k lands on mu_{k-1}.
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double next = 1.01 * c[k].mu + (3.0 - c[k].consumption);
    CHECK(next == doctest::Approx(c[k - 1].mu).epsilon(1e-12));
  }
}

TEST_CASE("mu_discrete rejects bad arguments") {
  CHECK_THROWS_AS(ifp::mu_discrete(kFig, 0.0, 5), ifp::DomainError);
  CHECK_THROWS_AS(ifp::mu_discrete(kFig, 1.0, 0), ifp::DomainError);
}
