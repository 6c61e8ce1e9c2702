#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace otw {

struct BenchRecord {
  std::string metric;
  std::size_t n = 0;
  std::size_t repetitions = 0;
  double median_seconds = 0.0;       // per single evaluation
  double throughput_per_second = 0.0;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  std::vector<std::pair<std::string, double>> slopes;  // fitted log2/log2 slope per metric
};

struct BenchOptions {
  std::size_t min_n = 64;
  std::size_t max_n = 8192;
  std::size_t repetitions = 5;   // >= 3; one extra warmup repetition is discarded
  std::uint64_t seed = 0;
  bool include_layers = true;
  std::size_t layer_max_n = 2048;  // the DTW layer backward stores an n x n table
};

// Times single-pair distance evaluations (and feature-layer passes) on a
// doubling ladder of series lengths. Each measurement batches enough calls
// to be well above clock resolution; the median over the repetitions is
// reported, with a discarded warmup. Wall time uses the monotonic clock.
BenchReport run_bench(const BenchOptions& options);

// Least-squares slope of log2(seconds) against log2(n).
double fit_loglog_slope(const std::vector<std::pair<std::size_t, double>>& points);

}  // namespace otw
