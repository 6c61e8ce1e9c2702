#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "otw/errors.hpp"
#include "otw/rng.hpp"
#include "otw/series.hpp"

using namespace otw;

namespace {

TimeSeries random_series(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return TimeSeries(std::move(v));
}

}  // namespace

TEST_CASE("TimeSeries rejects empty and non-finite input") {
  CHECK_THROWS_AS(TimeSeries({}), DataError);
  CHECK_THROWS_AS(TimeSeries({1.0, std::numeric_limits<double>::quiet_NaN()}), DataError);
  CHECK_THROWS_AS(TimeSeries({std::numeric_limits<double>::infinity()}), DataError);
  CHECK_NOTHROW(TimeSeries({0.0}));
}

TEST_CASE("prefix_sums on small examples") {
  CHECK(prefix_sums(TimeSeries({1, 2, 3})).values == std::vector<double>{1, 3, 6});
  CHECK(prefix_sums(TimeSeries({0, 0, 0})).values == std::vector<double>{0, 0, 0});
  CHECK(prefix_sums(TimeSeries({5})).values == std::vector<double>{5});
}

TEST_CASE("windowed_prefix_sums on small examples") {
  const TimeSeries a({1, 2, 3});
  CHECK(windowed_prefix_sums(a, 2).values == std::vector<double>{1, 3, 5});
  CHECK(windowed_prefix_sums(a, 3).values == prefix_sums(a).values);
  CHECK(windowed_prefix_sums(a, 1).values == a.values());
  CHECK_THROWS_AS(windowed_prefix_sums(a, 0), DataError);
  CHECK_THROWS_AS(windowed_prefix_sums(a, 4), DataError);
}

TEST_CASE("windowed sums collapse to the full sums and the series itself") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 63));
    const TimeSeries a = random_series(rng, n);
    CHECK(windowed_prefix_sums(a, n).values == prefix_sums(a).values);
    CHECK(windowed_prefix_sums(a, 1).values == a.values());
  }
}

TEST_CASE("windowed sums match the trailing-sum definition") {
  Rng rng(12);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 30));
    const std::size_t s = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    const TimeSeries a = random_series(rng, n);
    const auto windowed = windowed_prefix_sums(a, s).values;
    for (std::size_t i = 0; i < n; ++i) {
      double expected = 0.0;
      for (std::size_t j = (i + 1 >= s ? i + 1 - s : 0); j <= i; ++j) expected += a[j];
      CHECK(windowed[i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("full prefix sums are non-decreasing for nonnegative series") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const TimeSeries a = random_series(rng, 32, 0.0, 3.0);
    const auto sums = prefix_sums(a).values;
    for (std::size_t i = 1; i < sums.size(); ++i) CHECK(sums[i] >= sums[i - 1]);
  }
}

TEST_CASE("prefix sums are linear") {
  Rng rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 40));
    const TimeSeries a = random_series(rng, n);
    const TimeSeries b = random_series(rng, n);
    const double alpha = rng.uniform(-2.0, 2.0);
    const double beta = rng.uniform(-2.0, 2.0);
    std::vector<double> mixed(n);
    for (std::size_t i = 0; i < n; ++i) mixed[i] = alpha * a[i] + beta * b[i];
    const auto lhs = prefix_sums(TimeSeries(mixed)).values;
    const auto pa = prefix_sums(a).values;
    const auto pb = prefix_sums(b).values;
    for (std::size_t i = 0; i < n; ++i) {
      const double rhs = alpha * pa[i] + beta * pb[i];
      CHECK(lhs[i] == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("split_signs definition and reconstruction") {
  const auto [pos, neg] = split_signs(TimeSeries({1, -2, 0}));
  CHECK(pos.values() == std::vector<double>{1, 0, 0});
  CHECK(neg.values() == std::vector<double>{0, 2, 0});

  const auto [p2, n2] = split_signs(TimeSeries({-3}));
  CHECK(p2.values() == std::vector<double>{0});
  CHECK(n2.values() == std::vector<double>{3});

  const TimeSeries nonneg({0.5, 0.0, 2.0});
  const auto [p3, n3] = split_signs(nonneg);
  CHECK(p3.values() == nonneg.values());
  CHECK(n3.values() == std::vector<double>{0, 0, 0});

  Rng rng(15);
  for (int rep = 0; rep < 50; ++rep) {
    const TimeSeries a = random_series(rng, 24);
    const auto [pos_r, neg_r] = split_signs(a);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(pos_r[i] - neg_r[i] == a[i]);
      CHECK(pos_r[i] * neg_r[i] == 0.0);
    }
  }
}

TEST_CASE("z_normalize examples") {
  CHECK(z_normalize(TimeSeries({0, 0, 0})).values() == std::vector<double>{0, 0, 0});
  CHECK(z_normalize(TimeSeries({1, 3})).values() == std::vector<double>{-1, 1});

  // Idempotence within 1e-12.
  Rng rng(16);
  const TimeSeries a = random_series(rng, 40);
  const TimeSeries once = z_normalize(a);
  const TimeSeries twice = z_normalize(once);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-12));
  }

  double mean = 0.0;
  for (std::size_t i = 0; i < once.size(); ++i) mean += once[i];
  mean /= static_cast<double>(once.size());
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  double var = 0.0;
  for (std::size_t i = 0; i < once.size(); ++i) var += (once[i] - mean) * (once[i] - mean);
  var /= static_cast<double>(once.size());
  CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
}
