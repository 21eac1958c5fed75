#include <cmath>
#include <vector>

#include "doctest.h"
#include "ifp/consumption.hpp"
#include "ifp/errors.hpp"
#include "ifp/validation.hpp"

using ifp::ModelParams;

namespace {

constexpr ModelParams kR0{0.08, 0.0, 0.5, 3.0};
constexpr ModelParams kFig = ifp::kFigureParams;

}  // namespace

TEST_CASE("finite differences on polynomials") {
  const auto g = ifp::fd_gradient([](double a, double y) { return a * y; }, 2, 3, 1e-3, 1e-3);
  CHECK(g.d_da == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(g.d_dy == doctest::Approx(2.0).epsilon(1e-10));
  const auto z = ifp::fd_gradient([](double, double) { return 7.0; }, 1, 1, 1e-3, 1e-3);
  CHECK(z.d_da == 0.0);
  CHECK(z.d_dy == 0.0);
  const auto h = ifp::fd_hessian([](double a, double y) { return a * a * y; }, 1, 1, 1e-3, 1e-3);
  CHECK(h.d2_aa == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(h.d2_ay == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(h.d2_yy) <= 1e-6);
  // A symmetric field gives symmetric second derivatives.
  const auto sym = [](double a, double y) { return std::exp(a * y) + a * a + y * y; };
  const auto s = ifp::fd_hessian(sym, 0.7, 0.7, 1e-3, 1e-3);
  CHECK(s.d2_aa == doctest::Approx(s.d2_yy).epsilon(1e-12));
}

TEST_CASE("finite differences reproduce the closed-form derivatives") {
  const ifp::ScalarField c = [](double a, double y) {
    ModelParams p = kR0;
    p.y = y;
    return ifp::consumption_now_r0(p, a);
  };
  const auto j = ifp::jacobian_closed(kR0, 3.0);
  const auto g = ifp::fd_gradient(c, 3.0, 3.0, ifp::fd_step_first(3.0), ifp::fd_step_first(3.0));
  CHECK(g.d_da == doctest::Approx(j.dc_da).epsilon(1e-6));
  CHECK(g.d_dy == doctest::Approx(j.dc_dy).epsilon(1e-6));
  const auto hc = ifp::hessian_closed(kR0, 3.0);
  const auto h = ifp::fd_hessian(c, 3.0, 3.0, ifp::fd_step_second(3.0), ifp::fd_step_second(3.0));
  CHECK(h.d2_aa == doctest::Approx(hc.d2c_da2).epsilon(1e-4));
  CHECK(h.d2_ay == doctest::Approx(hc.d2c_dady).epsilon(1e-4));
  CHECK(h.d2_yy == doctest::Approx(hc.d2c_dy2).epsilon(1e-4));
}

TEST_CASE("RK4 budget simulation") {
  const double T = ifp::h_closed_r0(kR0, 3.0).T;
  const auto path = ifp::simulate_assets(kR0, 3.0, T / 1e4);
  CHECK(std::abs(path.assets_at(T)) <= 1e-6 * 3.0);
  CHECK(path.depletion_time_observed == doctest::Approx(T).epsilon(1e-5));
  CHECK(path.depletion_time_closed == T);
  CHECK(path.assets_at(T / 2) == doctest::Approx(ifp::mu(kR0, T / 2)).epsilon(1e-6));
  CHECK(path.assets_at(0.0) == 3.0);
  CHECK(path.min_assets() >= -1e-12 * 3.0);
  CHECK(path.samples.back().t >= T + 1 - 1e-12);
  // After depletion consumption equals income and assets stay at zero.
  CHECK(std::abs(path.assets_at(T + 0.5)) <= 1e-9);

  const auto with_r = ifp::simulate_assets(kFig, 3.0, 1e-3);
  const double Tr = ifp::h_numeric(kFig, 3.0).T;
  CHECK(with_r.assets_at(Tr / 3) == doctest::Approx(ifp::mu(kFig, 2 * Tr / 3)).epsilon(1e-9));

  CHECK_THROWS_AS(ifp::simulate_assets(kR0, 3.0, T / 50), ifp::DomainError);
  CHECK_THROWS_AS(ifp::simulate_assets(kR0, 0.0, 0.01), ifp::DomainError);
}

TEST_CASE("RK4 self-convergence") {
  const double T = ifp::h_closed_r0(kR0, 3.0).T;
  const double coarse = std::abs(ifp::simulate_assets(kR0, 3.0, T / 100).samples[50].a - ifp::mu(kR0, T / 2));
  const double fine = std::abs(ifp::simulate_assets(kR0, 3.0, T / 200).samples[100].a - ifp::mu(kR0, T / 2));
  CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("small initial assets deplete almost immediately") {
  const double T = ifp::h_closed_r0(kR0, 1e-8).T;
  const auto path = ifp::simulate_assets(kR0, 1e-8, T / 100);
  CHECK(path.depletion_time_closed < 1e-3);
  for (const auto& s : path.samples) CHECK(s.c == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("discounted utility") {
  CHECK(ifp::pdv_utility(kFig, 0.0) == doctest::Approx(ifp::crra_utility(3.0, 0.5) / 0.08).epsilon(1e-14));
  for (const ModelParams& p : {kR0, kFig}) {
    for (const double a0 : {0.3, 3.0, 30.0, 300.0}) {
      const double v = ifp::pdv_utility(p, a0);
      CHECK(v < ifp::value_upper_bound(p, a0));
      CHECK(v > ifp::pdv_utility(p, 0.0));
      CHECK(ifp::pdv_utility(p, a0, 1e-10, 100) == doctest::Approx(v).epsilon(1e-9));
    }
  }
  // Constant consumption y forever.
  CHECK(ifp::discounted_utility(kFig, 5.0, [](double) { return 3.0; }) ==
        doctest::Approx(ifp::crra_utility(3.0, 0.5) / 0.08).epsilon(1e-12));
}

TEST_CASE("optimal path beats budget-matched perturbations") {
  for (const ModelParams& p : {kR0, kFig}) {
    const auto rep = ifp::perturbation_check(p, 3.0);
    REQUIRE(rep.perturbed.size() == 10);
    REQUIRE(rep.frequencies.size() == 10);
    for (const double v : rep.perturbed) CHECK(v < rep.optimal);
  }
}

TEST_CASE("asset grid") {
  const auto g = ifp::make_asset_grid(2000, 30.0, 3.0);
  REQUIRE(g.size() == 2000);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 30.0);
  std::size_t below = 0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(g[i] > g[i - 1]);
    if (g[i] < 3.0) ++below;
  }
  // Node density below y is about five times the density above.
  const double density_below = below / 3.0;
  const double density_above = (g.size() - below) / 27.0;
  CHECK(density_below / density_above == doctest::Approx(5.0).epsilon(0.1));
}

TEST_CASE("value iteration") {
  const auto grid = ifp::make_asset_grid(400, 30.0, 3.0);
  const auto dp = ifp::grid_dp(kFig, 1.0, grid);
  CHECK(dp.policy.front() == doctest::Approx(3.0).epsilon(1e-8));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(dp.policy[i] >= dp.policy[i - 1]);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double left = (dp.value[i] - dp.value[i - 1]) / (grid[i] - grid[i - 1]);
    const double right = (dp.value[i + 1] - dp.value[i]) / (grid[i + 1] - grid[i]);
    CHECK(right - left <= 1e-9);
  }
  const auto policy = ifp::discrete_policy(kFig, 1.0, 30.0);
  double gap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(policy(grid[i]) - dp.policy[i]));
  CHECK(gap <= 2e-3 * 3.0);
  CHECK_THROWS_AS(ifp::grid_dp(kFig, 0.0, grid), ifp::DomainError);
}

TEST_CASE("the verbatim knot recursion does not match the period budget at r > 0") {
  const auto grid = ifp::make_asset_grid(400, 30.0, 3.0);
  const auto dp = ifp::grid_dp(kFig, 1.0, grid);
  const auto policy = ifp::discrete_policy(kFig, 1.0, 30.0, ifp::KnotRule::implicit_sequence);
  double gap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(policy(grid[i]) - dp.policy[i]));
  CHECK(gap > 1e-2 * 3.0);
}

TEST_CASE("approximation error report") {
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(0.75 * i);
  const std::vector<double> rs{0.0, 0.02, 0.01, 0.005};
  const auto rows = ifp::approximation_error_report(kFig, rs, grid);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].max_rel_gap == 0.0);
  CHECK(rows[0].mean_rel_gap == 0.0);
  CHECK(rows[1].max_rel_gap / rows[2].max_rel_gap == doctest::Approx(2.2).epsilon(0.1));
  CHECK(rows[2].max_rel_gap / rows[3].max_rel_gap == doctest::Approx(2.1).epsilon(0.1));
  for (const auto& row : rows) CHECK(row.mean_rel_gap <= row.max_rel_gap);
  const std::vector<double> r_bad{0.08};
  CHECK_THROWS_AS(ifp::approximation_error_report(kFig, r_bad, grid), ifp::ValidationError);
}
