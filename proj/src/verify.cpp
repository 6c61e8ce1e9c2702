#include "otw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otw/distance.hpp"
#include "otw/dtw.hpp"
#include "otw/ot_oracle.hpp"
#include "otw/rng.hpp"
#include "otw/series.hpp"

namespace otw {

namespace {

constexpr double kTol = 1e-9;

// Entries from {0, 0.5, ..., 3}: small halves keep the LP arithmetic exact
// in practice.
std::vector<double> random_halves(Rng& rng, std::size_t n) {
  std::vector<double> out(n);
  for (double& v : out) v = 0.5 * static_cast<double>(rng.uniform_int(0, 6));
  return out;
}

double cycle_m(std::size_t i) {
  static const double ms[] = {0.3, 1.0, 3.0};
  return ms[i % 3];
}

struct SlackAccumulator {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;

  void add(double slack) {
    min = std::min(min, slack);
    max = std::max(max, slack);
    sum += slack;
    ++count;
  }

  void finish(SweepResult& result) const {
    result.slack_min = count ? min : 0.0;
    result.slack_max = count ? max : 0.0;
    result.slack_mean = count ? sum / static_cast<double>(count) : 0.0;
  }
};

}  // namespace

SweepResult upper_bound_sweep(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  SweepResult result;
  result.name = "upper_bound";
  result.instances = count;
  SlackAccumulator slack;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    const auto a = random_halves(rng, n);
    const auto b = random_halves(rng, n);
    const auto check = check_upper_bound(a, b, cycle_m(i));
    if (check.holds) {
      ++result.passes;
    }
    result.max_violation = std::max(result.max_violation, check.lhs - check.rhs);
    slack.add(check.rhs - check.lhs);
  }
  result.max_violation = std::max(result.max_violation, 0.0);
  slack.finish(result);
  return result;
}

SweepResult shift_sweep(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  SweepResult result;
  result.name = "shift_sensitivity";
  result.instances = count;
  SlackAccumulator slack;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 10));
    const std::size_t t = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(std::min<std::size_t>(3, n - 1))));
    const auto a = random_halves(rng, n);
    auto b = random_halves(rng, n);
    for (std::size_t j = n - t; j < n; ++j) b[j] = 0.0;  // zero padding for the shift
    const auto check = check_shift_sensitivity(a, b, t, cycle_m(i));
    if (check.holds) {
      ++result.passes;
    }
    result.max_violation = std::max(result.max_violation, check.delta - check.bound);
    slack.add(check.bound - check.delta);
  }
  result.max_violation = std::max(result.max_violation, 0.0);
  slack.finish(result);
  return result;
}

SweepResult interpolation_sweep(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  SweepResult result;
  result.name = "interpolation";
  result.instances = count;
  SlackAccumulator slack;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 64));
    std::vector<double> av(n), bv(n);
    for (double& v : av) v = rng.uniform(0.0, 3.0);
    for (double& v : bv) v = rng.uniform(0.0, 3.0);
    const TimeSeries a(av), b(bv);

    OtwParams local;
    local.m = 1.0;
    local.s = 1;
    const double pointwise = otw(a, b, local);
    const double l1 = minkowski(a, b, 1);

    const double m = cycle_m(i);
    OtwParams global;
    global.m = m;
    global.s = n;
    const double windowed = otw(a, b, global);
    // Independent route straight from the cumulative-sum definition.
    const auto pa = prefix_sums(a).values;
    const auto pb = prefix_sums(b).values;
    double direct = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) direct += std::fabs(pa[j] - pb[j]);
    direct += m * std::fabs(pa[n - 1] - pb[n - 1]);

    const double diff = std::max(std::fabs(pointwise - l1), std::fabs(windowed - direct));
    if (pointwise == l1 && windowed == direct) {
      ++result.passes;
    }
    result.max_violation = std::max(result.max_violation, diff);
    slack.add(diff);
  }
  slack.finish(result);
  return result;
}

SweepResult balanced_sweep(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  SweepResult result;
  result.name = "balanced_equivalence";
  result.instances = count;
  SlackAccumulator slack;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    std::vector<double> a, b;
    double sum_a = 0.0, sum_b = 0.0;
    while (sum_a <= 0.0) {
      a = random_halves(rng, n);
      sum_a = 0.0;
      for (double v : a) sum_a += v;
    }
    while (sum_b <= 0.0) {
      b = random_halves(rng, n);
      sum_b = 0.0;
      for (double v : b) sum_b += v;
    }
    const double scale = sum_a / sum_b;
    for (double& v : b) v *= scale;

    const double closed = wasserstein_1d_closed_form(a, b);
    OtwParams params;
    params.m = cycle_m(i);
    params.s = n;
    const double warped = otw(TimeSeries(a), TimeSeries(b), params);

    std::vector<std::vector<double>> costs(n, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        costs[r][c] = r > c ? static_cast<double>(r - c) : static_cast<double>(c - r);
      }
    }
    const double lp = solve_transport_lp(a, b, costs).objective;

    const double warp_gap = std::fabs(warped - closed);
    const double lp_gap = std::fabs(lp - closed);
    const double cross_gap = std::fabs(lp - warped);
    if (warp_gap <= 1e-12 && lp_gap <= kTol && cross_gap <= kTol) {
      ++result.passes;
    }
    result.max_violation = std::max({result.max_violation, warp_gap - 1e-12,
                                     lp_gap - kTol, cross_gap - kTol});
    slack.add(std::max({warp_gap, lp_gap, cross_gap}));
  }
  result.max_violation = std::max(result.max_violation, 0.0);
  slack.finish(result);
  return result;
}

std::vector<SweepResult> run_all_sweeps(std::uint64_t seed) {
  return {
      upper_bound_sweep(1000, seed),
      shift_sweep(500, seed + 1),
      interpolation_sweep(1000, seed + 2),
      balanced_sweep(500, seed + 3),
  };
}

}  // namespace otw
