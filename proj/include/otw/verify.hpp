#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace otw {

// Outcome of one randomized property sweep. `violation` is how far the
// worst instance exceeded its bound (0 when everything passed); the slack
// fields summarize bound-minus-value across instances.
struct SweepResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t passes = 0;
  double max_violation = 0.0;
  double slack_min = 0.0;
  double slack_mean = 0.0;
  double slack_max = 0.0;

  bool all_pass() const { return passes == instances; }
};

// Exact unbalanced OT from the LP never exceeds the linear-time warping
// value. Random nonnegative pairs, n in [2,12], m cycling {0.3, 1, 3}.
SweepResult upper_bound_sweep(std::size_t count, std::uint64_t seed);

// Shifting a zero-padded second argument by t moves the exact unbalanced OT
// distance by at most t * sum(a). n <= 10, t <= 3.
SweepResult shift_sweep(std::size_t count, std::uint64_t seed);

// Window 1 equals the l1 distance and window n the full-window value, both
// exactly.
SweepResult interpolation_sweep(std::size_t count, std::uint64_t seed);

// On balanced pairs the warping distance, the cumulative-sum closed form
// and the LP oracle all agree.
SweepResult balanced_sweep(std::size_t count, std::uint64_t seed);

// The four sweeps above at their default sizes (1000/500/1000/500).
std::vector<SweepResult> run_all_sweeps(std::uint64_t seed);

}  // namespace otw
