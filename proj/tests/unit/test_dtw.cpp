#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "otw/dtw.hpp"
#include "otw/errors.hpp"
#include "otw/rng.hpp"
#include "test_util.hpp"

using otw::DtwParams;
using otw::LocalCost;
using otw::Rng;
using otw::TimeSeries;

namespace {

DtwParams dtw_params(std::optional<std::size_t> window, LocalCost cost) {
  DtwParams p;
  p.window = window;
  p.local_cost = cost;
  return p;
}

TimeSeries random_series(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return TimeSeries(std::move(v));
}

}  // namespace

TEST_CASE("dtw small examples") {
  const TimeSeries up({1, 2, 3});
  const TimeSeries down({3, 2, 1});
  // Values frozen from the path-enumeration oracle below.
  CHECK(otw::dtw(up, down, dtw_params(std::nullopt, LocalCost::AbsDiff)) == 4.0);
  CHECK(otw::dtw(up, down, dtw_params(std::nullopt, LocalCost::SquaredDiff)) == 8.0);
  CHECK(otw::dtw_brute_force(up, down, dtw_params(std::nullopt, LocalCost::AbsDiff)) == 4.0);
  CHECK(otw::dtw_brute_force(up, down, dtw_params(std::nullopt, LocalCost::SquaredDiff)) == 8.0);

  CHECK(otw::dtw(TimeSeries({0, 1}), TimeSeries({1, 0}),
                 dtw_params(std::nullopt, LocalCost::SquaredDiff)) == 2.0);

  CHECK(otw::dtw(up, up, dtw_params(std::nullopt, LocalCost::SquaredDiff)) == 0.0);
  CHECK(otw::dtw(TimeSeries({2}), TimeSeries({5}),
                 dtw_params(std::nullopt, LocalCost::AbsDiff)) == 3.0);
  CHECK(otw::dtw_brute_force(TimeSeries({2}), TimeSeries({5}),
                             dtw_params(std::nullopt, LocalCost::SquaredDiff)) == 9.0);
}

TEST_CASE("dtw validates input") {
  CHECK_THROWS_AS(otw::dtw(TimeSeries({1}), TimeSeries({1, 2}),
                           dtw_params(std::nullopt, LocalCost::AbsDiff)),
                  otw::DataError);
  Rng rng(50);
  CHECK_THROWS_AS(otw::dtw_brute_force(random_series(rng, 9), random_series(rng, 9),
                                       dtw_params(std::nullopt, LocalCost::AbsDiff)),
                  otw::DataError);
}

TEST_CASE("window zero reduces to the pointwise cost sum") {
  Rng rng(51);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 15));
    const TimeSeries a = random_series(rng, n);
    const TimeSeries b = random_series(rng, n);
    double l1 = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      l1 += std::fabs(a[i] - b[i]);
      sq += (a[i] - b[i]) * (a[i] - b[i]);
    }
    CHECK(near_abs(otw::dtw(a, b, dtw_params(0, LocalCost::AbsDiff)), l1, 1e-12));
    CHECK(near_abs(otw::dtw(a, b, dtw_params(0, LocalCost::SquaredDiff)), sq, 1e-12));
  }
}

TEST_CASE("dtw equals the path enumeration oracle") {
  Rng rng(52);
  const std::optional<std::size_t> windows[] = {std::optional<std::size_t>(0),
                                                std::optional<std::size_t>(1), std::nullopt};
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 7));
    const TimeSeries a = random_series(rng, n);
    const TimeSeries b = random_series(rng, n);
    for (const auto& window : windows) {
      for (LocalCost cost : {LocalCost::SquaredDiff, LocalCost::AbsDiff}) {
        const DtwParams p = dtw_params(window, cost);
        CHECK(otw::dtw(a, b, p) == otw::dtw_brute_force(a, b, p));
      }
    }
  }
}

TEST_CASE("unconstrained dtw never exceeds the pointwise sum and is symmetric") {
  Rng rng(53);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 30));
    const TimeSeries a = random_series(rng, n);
    const TimeSeries b = random_series(rng, n);
    for (LocalCost cost : {LocalCost::SquaredDiff, LocalCost::AbsDiff}) {
      const double free = otw::dtw(a, b, dtw_params(std::nullopt, cost));
      const double diagonal = otw::dtw(a, b, dtw_params(0, cost));
      CHECK(free <= diagonal + 1e-12);
      CHECK(free == otw::dtw(b, a, dtw_params(std::nullopt, cost)));
    }
  }
}

TEST_CASE("minkowski examples") {
  CHECK(otw::minkowski(TimeSeries({1, 2}), TimeSeries({1, 2}), 1) == 0.0);
  CHECK(otw::minkowski(TimeSeries({1, 2}), TimeSeries({3, 5}), 1) == doctest::Approx(5.0));
  CHECK(otw::minkowski(TimeSeries({0, 3}), TimeSeries({4, 0}), 2) == doctest::Approx(5.0));
  CHECK_THROWS_AS(otw::minkowski(TimeSeries({1}), TimeSeries({1, 2}), 1), otw::DataError);
  CHECK_THROWS_AS(otw::minkowski(TimeSeries({1}), TimeSeries({1}), 3), otw::DataError);
}
