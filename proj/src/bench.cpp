#include "otw/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "otw/distance.hpp"
#include "otw/dtw.hpp"
#include "otw/errors.hpp"
#include "otw/net.hpp"
#include "otw/rng.hpp"
#include "otw/series.hpp"

namespace otw {

namespace {

// Keeps the optimizer from discarding the timed calls.
volatile double g_bench_sink = 0.0;

using Clock = std::chrono::steady_clock;

double time_once(const std::function<double()>& fn, std::size_t calls) {
  const auto start = Clock::now();
  double acc = 0.0;
  for (std::size_t c = 0; c < calls; ++c) acc += fn();
  const auto stop = Clock::now();
  g_bench_sink = g_bench_sink + acc;
  return std::chrono::duration<double>(stop - start).count() /
         static_cast<double>(calls);
}

// Median per-call seconds over `reps` measurements, after one discarded
// warmup. The warmup also calibrates how many calls fit one measurement.
double measure(const std::function<double()>& fn, std::size_t reps) {
  constexpr double kTargetBatchSeconds = 2e-3;
  const double warmup = time_once(fn, 1);
  const std::size_t calls = std::max<std::size_t>(
      1, static_cast<std::size_t>(kTargetBatchSeconds / std::max(warmup, 1e-9)));
  std::vector<double> samples(reps);
  for (auto& s : samples) s = time_once(fn, calls);
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) return samples[mid];
  return 0.5 * (samples[mid - 1] + samples[mid]);
}

}  // namespace

double fit_loglog_slope(const std::vector<std::pair<std::size_t, double>>& points) {
  if (points.size() < 2) throw DataError("fit_loglog_slope: need at least 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [n, seconds] : points) {
    const double x = std::log2(static_cast<double>(n));
    const double y = std::log2(seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(points.size());
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.repetitions < 3) throw DataError("run_bench: need at least 3 repetitions");
  if (options.min_n < 2 || options.max_n < options.min_n) {
    throw DataError("run_bench: bad ladder bounds");
  }
  BenchReport report;
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> curve;

  Rng rng(options.seed);
  for (std::size_t n = options.min_n; n <= options.max_n; n *= 2) {
    std::vector<double> av(n), bv(n);
    for (double& v : av) v = rng.uniform();
    for (double& v : bv) v = rng.uniform();
    const TimeSeries a(av), b(bv);

    OtwParams otw_params;  // full window, beta 0, direct
    DtwParams dtw_params;  // unconstrained, squared local cost

    std::vector<std::pair<std::string, std::function<double()>>> jobs;
    jobs.emplace_back("otw", [&a, &b, otw_params] { return otw(a, b, otw_params); });
    jobs.emplace_back("dtw", [&a, &b, dtw_params] { return dtw(a, b, dtw_params); });

    FeatureLayer otw_layer, dtw_layer;
    std::vector<double> upstream;
    if (options.include_layers && n <= options.layer_max_n) {
      OtwParams trained = otw_params;
      trained.beta = 0.1;
      otw_layer = FeatureLayer::otw_layer(1, n, trained, options.seed);
      dtw_layer = FeatureLayer::dtw_layer(1, n, dtw_params, options.seed);
      upstream.assign(1, 1.0);
      jobs.emplace_back("otw_layer_forward",
                        [&a, &otw_layer] { return layer_forward(a, otw_layer)[0]; });
      jobs.emplace_back("otw_layer_backward", [&a, &otw_layer, &upstream] {
        return layer_backward(a, otw_layer, upstream).weights[0];
      });
      jobs.emplace_back("dtw_layer_forward",
                        [&a, &dtw_layer] { return layer_forward(a, dtw_layer)[0]; });
      jobs.emplace_back("dtw_layer_backward", [&a, &dtw_layer, &upstream] {
        return layer_backward(a, dtw_layer, upstream).weights[0];
      });
    }

    for (const auto& [name, fn] : jobs) {
      BenchRecord record;
      record.metric = name;
      record.n = n;
      record.repetitions = options.repetitions;
      record.median_seconds = measure(fn, options.repetitions);
      record.throughput_per_second =
          record.median_seconds > 0.0 ? 1.0 / record.median_seconds : 0.0;
      curve[name].emplace_back(n, record.median_seconds);
      report.records.push_back(std::move(record));
    }
  }

  for (const auto& [name, points] : curve) {
    if (points.size() >= 2) {
      report.slopes.emplace_back(name, fit_loglog_slope(points));
    }
  }
  return report;
}

}  // namespace otw
