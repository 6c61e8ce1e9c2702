#pragma once

#include <cstddef>
#include <optional>

#include "otw/series.hpp"

namespace otw {

enum class LocalCost { SquaredDiff, AbsDiff };

// Sakoe-Chiba banded DTW configuration; window is a band radius in index
// units, nullopt means unconstrained.
struct DtwParams {
  std::optional<std::size_t> window;
  LocalCost local_cost = LocalCost::SquaredDiff;
};

// Dynamic-time-warping alignment cost with step set {(1,0),(0,1),(1,1)},
// cells outside the band excluded. Equal lengths required. O(n * window)
// time, O(n) rolling memory.
double dtw(const TimeSeries& a, const TimeSeries& b, const DtwParams& p);

// Exhaustive enumeration of monotone alignment paths, for n <= 8. Test
// oracle for dtw; equals it exactly.
double dtw_brute_force(const TimeSeries& a, const TimeSeries& b, const DtwParams& p);

// l1 (order 1) or l2 (order 2) norm of a - b.
double minkowski(const TimeSeries& a, const TimeSeries& b, int order);

}  // namespace otw
