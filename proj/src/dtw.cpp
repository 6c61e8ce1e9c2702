#include "otw/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "otw/errors.hpp"

namespace otw {

namespace {

inline double local_cost(double x, double y, LocalCost cost) {
  const double d = x - y;
  return cost == LocalCost::SquaredDiff ? d * d : std::fabs(d);
}

std::size_t effective_band(const DtwParams& p, std::size_t n) {
  if (!p.window.has_value()) return n - 1;
  return std::min(*p.window, n - 1);
}

}  // namespace

double dtw(const TimeSeries& a, const TimeSeries& b, const DtwParams& p) {
  if (a.size() != b.size()) {
    throw DataError("dtw: series lengths differ (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  const std::size_t n = a.size();
  const std::size_t w = effective_band(p, n);
  const double inf = std::numeric_limits<double>::infinity();

  // Two rolling rows; cells outside the band are never touched, so the run
  // time is O(n * w).
  std::vector<double> prev(n), cur(n);
  std::size_t prev_lo = 0, prev_hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > w ? i - w : 0;
    const std::size_t hi = std::min(n - 1, i + w);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double c = local_cost(a[i], b[j], p.local_cost);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = inf;
        if (i > 0 && j >= prev_lo && j <= prev_hi) best = std::min(best, prev[j]);
        if (j > lo) best = std::min(best, cur[j - 1]);
        if (i > 0 && j > 0 && j - 1 >= prev_lo && j - 1 <= prev_hi) {
          best = std::min(best, prev[j - 1]);
        }
      }
      cur[j] = c + best;
    }
    std::swap(prev, cur);
    prev_lo = lo;
    prev_hi = hi;
  }
  const double result = prev[n - 1];
  if (!std::isfinite(result)) {
    throw DataError("dtw: band admits no alignment path");  // unreachable for equal lengths
  }
  return result;
}

namespace {

double brute_force_cell(const TimeSeries& a, const TimeSeries& b,
                        const DtwParams& p, std::size_t w,
                        std::size_t i, std::size_t j) {
  const double inf = std::numeric_limits<double>::infinity();
  const double c = local_cost(a[i], b[j], p.local_cost);
  if (i == 0 && j == 0) return c;
  auto in_band = [w](std::size_t r, std::size_t col) {
    return (r >= col ? r - col : col - r) <= w;
  };
  double best = inf;
  if (i > 0 && in_band(i - 1, j)) {
    best = std::min(best, brute_force_cell(a, b, p, w, i - 1, j));
  }
  if (j > 0 && in_band(i, j - 1)) {
    best = std::min(best, brute_force_cell(a, b, p, w, i, j - 1));
  }
  if (i > 0 && j > 0) {
    best = std::min(best, brute_force_cell(a, b, p, w, i - 1, j - 1));
  }
  return c + best;
}

}  // namespace

double dtw_brute_force(const TimeSeries& a, const TimeSeries& b, const DtwParams& p) {
  if (a.size() != b.size()) {
    throw DataError("dtw_brute_force: series lengths differ");
  }
  if (a.size() > 8) {
    throw DataError("dtw_brute_force: series longer than the size cap of 8");
  }
  const std::size_t w = effective_band(p, a.size());
  return brute_force_cell(a, b, p, w, a.size() - 1, b.size() - 1);
}

double minkowski(const TimeSeries& a, const TimeSeries& b, int order) {
  if (a.size() != b.size()) {
    throw DataError("minkowski: series lengths differ");
  }
  if (order != 1 && order != 2) {
    throw DataError("minkowski: order must be 1 or 2");
  }
  double acc = 0.0;
  if (order == 1) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace otw
