#include "otw/series.hpp"

#include <cmath>
#include <string>

#include "otw/errors.hpp"

namespace otw {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DataError("TimeSeries: series must be non-empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("TimeSeries: non-finite entry at index " + std::to_string(i));
    }
  }
}

namespace detail {

void windowed_prefix_sums_into(const std::vector<double>& src, std::size_t s,
                               std::vector<double>& out) {
  const std::size_t n = src.size();
  out.resize(n);
  if (s == 1) {
    // The window-1 sum is the entry itself; computing it directly keeps the
    // s=1 case exact instead of round-tripping through a subtraction.
    for (std::size_t i = 0; i < n; ++i) out[i] = src[i];
    return;
  }
  // General case: two full prefix-sum passes subtracted, P[i] - P[i-s].
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += src[i];
    out[i] = acc;
  }
  if (s >= n) return;  // P[i-s] == 0 throughout
  for (std::size_t i = n; i-- > s;) {
    out[i] -= out[i - s];
  }
}

}  // namespace detail

PrefixSums prefix_sums(const TimeSeries& a) {
  PrefixSums out;
  out.window = std::nullopt;
  detail::windowed_prefix_sums_into(a.values(), a.size(), out.values);
  return out;
}

PrefixSums windowed_prefix_sums(const TimeSeries& a, std::size_t s) {
  if (s < 1 || s > a.size()) {
    throw DataError("windowed_prefix_sums: window " + std::to_string(s) +
                    " out of range [1, " + std::to_string(a.size()) + "]");
  }
  PrefixSums out;
  out.window = s;
  detail::windowed_prefix_sums_into(a.values(), s, out.values);
  return out;
}

std::pair<TimeSeries, TimeSeries> split_signs(const TimeSeries& a) {
  std::vector<double> pos(a.size()), neg(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    pos[i] = a[i] > 0.0 ? a[i] : 0.0;
    neg[i] = a[i] < 0.0 ? -a[i] : 0.0;
  }
  return {TimeSeries(std::move(pos)), TimeSeries(std::move(neg))};
}

TimeSeries z_normalize(const TimeSeries& a) {
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n);
  std::vector<double> out(n);
  if (var <= 0.0) {
    // Constant series: all-zeros by convention.
    return TimeSeries(std::move(out));
  }
  const double inv_std = 1.0 / std::sqrt(var);
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] - mean) * inv_std;
  return TimeSeries(std::move(out));
}

}  // namespace otw
