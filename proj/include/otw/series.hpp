#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace otw {

// One univariate real-valued sequence. Construction validates that the
// series is non-empty and every entry is finite; after that the value is
// immutable and safe to share across threads.
class TimeSeries {
public:
  explicit TimeSeries(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const TimeSeries& other) const = default;

private:
  std::vector<double> values_;
};

// Trailing-window cumulative sums of a series. window == nullopt means the
// full cumulative sum; window == s means each entry sums the trailing s
// source entries (fewer at the start).
struct PrefixSums {
  std::vector<double> values;
  std::optional<std::size_t> window;  // nullopt: full prefix sums
};

// Full cumulative sums, values[i] = sum of the first i+1 entries. O(n).
PrefixSums prefix_sums(const TimeSeries& a);

// Windowed cumulative sums, values[i] = sum of entries (i-s, i]. Requires
// 1 <= s <= n. s == 1 reproduces the series itself and s == n the full
// prefix sums, exactly. O(n).
PrefixSums windowed_prefix_sums(const TimeSeries& a, std::size_t s);

// Elementwise positive and negative parts: pos = max(a, 0), neg = max(-a, 0).
// pos - neg reconstructs a exactly.
std::pair<TimeSeries, TimeSeries> split_signs(const TimeSeries& a);

// Shift to mean 0 and scale to population standard deviation 1. Constant
// series map to all-zeros instead of erroring.
TimeSeries z_normalize(const TimeSeries& a);

namespace detail {
// Writes the windowed prefix sums of src into out (resized to src.size()).
// Shared by the distance code so repeated calls can reuse a scratch buffer.
void windowed_prefix_sums_into(const std::vector<double>& src, std::size_t s,
                               std::vector<double>& out);
}  // namespace detail

}  // namespace otw
