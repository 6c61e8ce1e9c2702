#include <doctest.h>

#include <cmath>
#include <vector>

#include "otw/errors.hpp"

#include "test_util.hpp"
#include "otw/ot_oracle.hpp"
#include "otw/rng.hpp"
#include "otw/verify.hpp"

using namespace otw;

namespace {

std::vector<double> random_halves(Rng& rng, std::size_t n) {
  std::vector<double> out(n);
  for (double& v : out) v = 0.5 * static_cast<double>(rng.uniform_int(0, 6));
  return out;
}

std::vector<std::vector<double>> line_costs(std::size_t n) {
  std::vector<std::vector<double>> costs(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      costs[i][j] = i > j ? static_cast<double>(i - j) : static_cast<double>(j - i);
    }
  }
  return costs;
}

void check_plan_feasible(const TransportPlan& plan) {
  for (std::size_t i = 0; i < plan.rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < plan.cols; ++j) {
      CHECK(plan.at(i, j) >= 0.0);
      row += plan.at(i, j);
    }
    CHECK(near_abs(row, plan.supplies[i], 1e-9));
  }
  for (std::size_t j = 0; j < plan.cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < plan.rows; ++i) col += plan.at(i, j);
    CHECK(near_abs(col, plan.demands[j], 1e-9));
  }
}

void check_certificate(const TransportPlan& plan,
                       const std::vector<std::vector<double>>& costs) {
  for (std::size_t i = 0; i < plan.rows; ++i) {
    for (std::size_t j = 0; j < plan.cols; ++j) {
      const double reduced = costs[i][j] - plan.row_duals[i] - plan.col_duals[j];
      CHECK(reduced >= -1e-9);
    }
  }
}

}  // namespace

TEST_CASE("solve_transport_lp trivial instances") {
  const auto one = solve_transport_lp({1.0}, {1.0}, {{0.7}});
  CHECK(one.at(0, 0) == doctest::Approx(1.0));
  CHECK(one.objective == doctest::Approx(0.7));

  const auto two = solve_transport_lp({1.0, 1.0}, {1.0, 1.0}, {{0, 1}, {1, 0}});
  CHECK(two.objective == doctest::Approx(0.0));
  check_plan_feasible(two);
}

TEST_CASE("solve_transport_lp validates input") {
  CHECK_THROWS_AS(solve_transport_lp({1.0}, {2.0}, {{1.0}}), DataError);
  CHECK_THROWS_AS(solve_transport_lp({-1.0}, {-1.0}, {{1.0}}), DataError);
  CHECK_THROWS_AS(solve_transport_lp({1.0}, {1.0}, {{-0.5}}), DataError);
  CHECK_THROWS_AS(solve_transport_lp({}, {}, {}), DataError);
}

TEST_CASE("LP on line costs equals the cumulative-sum closed form") {
  Rng rng(21);
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    auto a = random_halves(rng, n);
    auto b = random_halves(rng, n);
    // Rebalance b onto a's total; skip degenerate zero-mass draws.
    double sa = 0.0, sb = 0.0;
    for (double v : a) sa += v;
    for (double v : b) sb += v;
    if (sa <= 0.0 || sb <= 0.0) continue;
    for (double& v : b) v *= sa / sb;

    const auto costs = line_costs(n);
    const auto plan = solve_transport_lp(a, b, costs);
    const double closed = wasserstein_1d_closed_form(a, b);
    CHECK(near_abs(plan.objective, closed, 1e-9));
    check_plan_feasible(plan);
    check_certificate(plan, costs);
  }
}

TEST_CASE("wasserstein_1d_closed_form examples") {
  CHECK(wasserstein_1d_closed_form({1, 2, 0.5}, {1, 2, 0.5}) == 0.0);
  CHECK(wasserstein_1d_closed_form({0.5, 0.5}, {1, 0}) == doctest::Approx(0.5));
  CHECK(wasserstein_1d_closed_form({1, 0, 0}, {0, 0, 1}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(wasserstein_1d_closed_form({1, 0}, {0, 2}), DataError);
  CHECK_THROWS_AS(wasserstein_1d_closed_form({-1, 2}, {1, 0}), DataError);
}

TEST_CASE("extend_with_sink examples") {
  const auto [a_hat, b_hat] = extend_with_sink({1, 2}, {0, 3});
  CHECK(a_hat == std::vector<double>{1, 2, 3});
  CHECK(b_hat == std::vector<double>{0, 3, 3});

  const auto [same_a, same_b] = extend_with_sink({1, 1}, {1, 1});
  CHECK(same_a == std::vector<double>{1, 1, 2});
  CHECK(same_b == std::vector<double>{1, 1, 2});

  const auto [zero_a, zero_b] = extend_with_sink({0, 0}, {0, 0});
  CHECK(zero_a == std::vector<double>{0, 0, 0});
  CHECK(zero_b == std::vector<double>{0, 0, 0});
}

TEST_CASE("build_sink_cost_matrix examples") {
  const auto tiny = build_sink_cost_matrix(1, 0.7);
  CHECK(tiny.entries == std::vector<std::vector<double>>{{0, 0.7}, {0.7, 0}});

  const auto small = build_sink_cost_matrix(2, 1.0);
  CHECK(small.entries == std::vector<std::vector<double>>{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});

  const auto corner = build_sink_cost_matrix(5, 2.5);
  CHECK(corner.entries[5][5] == 0.0);
}

TEST_CASE("unbalanced_ot examples") {
  CHECK(unbalanced_ot({1}, {2}, 0.7) == doctest::Approx(0.7));
  for (double m : {0.5, 1.0, 5.0}) {
    CHECK(unbalanced_ot({0.5, 0.5}, {1, 0}, m) == doctest::Approx(0.5));
  }
  // Below m = (n-1)/2 the round trip through the sink (2m per unit) beats a
  // direct move, so the exact optimum drops under the balanced value.
  for (double m : {0.1, 0.3}) {
    CHECK(unbalanced_ot({0.5, 0.5}, {1, 0}, m) == doctest::Approx(m));
  }
  CHECK(unbalanced_ot({1, 2, 3}, {1, 2, 3}, 1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(unbalanced_ot(std::vector<double>(17, 1.0), std::vector<double>(17, 1.0), 1.0),
                  DataError);
  CHECK_THROWS_AS(unbalanced_ot({-1}, {1}, 1.0), DataError);
}

TEST_CASE("unbalanced_ot reduces to the balanced value on balanced input") {
  Rng rng(22);
  for (int rep = 0; rep < 80; ++rep) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 10));
    auto a = random_halves(rng, n);
    auto b = random_halves(rng, n);
    double sa = 0.0, sb = 0.0;
    for (double v : a) sa += v;
    for (double v : b) sb += v;
    if (sa <= 0.0 || sb <= 0.0) continue;
    for (double& v : b) v *= sa / sb;
    const double balanced = wasserstein_1d_closed_form(a, b);
    // Reduction needs the sink detour to never undercut a direct move,
    // i.e. 2m >= n - 1.
    const double n_real = static_cast<double>(n);
    for (double m : {(n_real - 1.0) / 2.0, n_real, 2.0 * n_real}) {
      CHECK(near_abs(unbalanced_ot(a, b, m), balanced, 1e-9));
    }
  }
}

TEST_CASE("check_upper_bound examples") {
  const auto tight = check_upper_bound({1}, {2}, 0.7);
  CHECK(tight.lhs == doctest::Approx(0.7));
  CHECK(tight.rhs == doctest::Approx(0.7));
  CHECK(tight.holds);

  const auto same = check_upper_bound({1, 0.5}, {1, 0.5}, 1.0);
  CHECK(same.lhs == doctest::Approx(0.0));
  CHECK(same.rhs == doctest::Approx(0.0));
  CHECK(same.holds);
}

TEST_CASE("upper-bound sweep holds on random instances") {
  const auto result = upper_bound_sweep(200, 7);
  CHECK(result.passes == result.instances);
  CHECK(result.max_violation == 0.0);
}

TEST_CASE("check_shift_sensitivity examples") {
  const auto zero = check_shift_sensitivity({1, 1}, {0.5, 0.5}, 0, 1.0);
  CHECK(zero.delta == doctest::Approx(0.0));
  CHECK(zero.holds);

  const auto unit = check_shift_sensitivity({1, 0, 0, 0}, {1, 0, 0, 0}, 1, 1.0);
  CHECK(unit.delta == doctest::Approx(1.0));
  CHECK(unit.bound == doctest::Approx(1.0));
  CHECK(unit.holds);

  CHECK_THROWS_AS(check_shift_sensitivity({1, 1}, {1, 1}, 2, 1.0), DataError);
  CHECK_THROWS_AS(check_shift_sensitivity({1, 1}, {1, 1}, 1, 1.0), DataError);
}

TEST_CASE("shift sweep holds on random instances") {
  const auto result = shift_sweep(150, 8);
  CHECK(result.passes == result.instances);
  CHECK(result.max_violation == 0.0);
}

TEST_CASE("degenerate instances keep the optimality certificate") {
  // Lots of zero supplies and equal costs force degenerate pivots.
  Rng rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 8));
    std::vector<double> a(n, 0.0), b(n, 0.0);
    a[0] = 1.0;
    b[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))] = 1.0;
    const auto costs = line_costs(n);
    const auto plan = solve_transport_lp(a, b, costs);
    check_plan_feasible(plan);
    check_certificate(plan, costs);
    CHECK(near_abs(plan.objective, wasserstein_1d_closed_form(a, b), 1e-9));
  }
}
