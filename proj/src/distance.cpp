#include "otw/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "otw/errors.hpp"

namespace otw {

double smooth_l1(double x, double beta) {
  if (beta < 0.0) throw DataError("smooth_l1: beta must be >= 0");
  const double ax = std::fabs(x);
  if (beta == 0.0) return ax;
  if (ax < beta) return x * x / (2.0 * beta);
  return ax - beta / 2.0;
}

double smooth_l1_deriv(double x, double beta) {
  if (beta < 0.0) throw DataError("smooth_l1_deriv: beta must be >= 0");
  if (beta == 0.0) return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  const double ax = std::fabs(x);
  if (ax < beta) return x / beta;
  return x > 0.0 ? 1.0 : -1.0;
}

namespace {

std::size_t effective_window(const OtwParams& p, std::size_t n) {
  if (p.s == 0 || p.s > n) return n;  // clamp: grids sweep absolute s
  return p.s;
}

void check_params(const OtwParams& p) {
  if (p.m < 0.0) throw DataError("otw: waste cost m must be >= 0");
  if (p.beta < 0.0) throw DataError("otw: beta must be >= 0");
}

// Direct-strategy value on raw vectors. Scratch buffers are reused across
// calls on the same thread.
double otw_direct(const std::vector<double>& a, const std::vector<double>& b,
                  double m, std::size_t s, double beta) {
  thread_local std::vector<double> as, bs;
  detail::windowed_prefix_sums_into(a, s, as);
  detail::windowed_prefix_sums_into(b, s, bs);
  const std::size_t n = a.size();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) acc += smooth_l1(as[i] - bs[i], beta);
  acc += m * smooth_l1(as[n - 1] - bs[n - 1], beta);
  return acc;
}

// Gradient of otw_direct with respect to a; the gradient with respect to b
// is its negation. grad[j] = sum of weighted L' terms over the window of
// positions j feeds into, kept O(n) by a sliding suffix accumulator.
void otw_direct_grad(const std::vector<double>& a, const std::vector<double>& b,
                     double m, std::size_t s, double beta,
                     std::vector<double>& grad) {
  thread_local std::vector<double> as, bs, weighted;
  detail::windowed_prefix_sums_into(a, s, as);
  detail::windowed_prefix_sums_into(b, s, bs);
  const std::size_t n = a.size();
  weighted.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i + 1 < n) ? 1.0 : m;
    weighted[i] = w * smooth_l1_deriv(as[i] - bs[i], beta);
  }
  grad.assign(n, 0.0);
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    acc += weighted[j];
    if (j + s < n) acc -= weighted[j + s];
    grad[j] = acc;
  }
}

}  // namespace

double otw(const TimeSeries& a, const TimeSeries& b, const OtwParams& p) {
  if (a.size() != b.size()) {
    throw DataError("otw: series lengths differ (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  check_params(p);
  const std::size_t s = effective_window(p, a.size());
  if (p.sign_strategy == SignStrategy::Direct) {
    return otw_direct(a.values(), b.values(), p.m, s, p.beta);
  }
  const auto [a_pos, a_neg] = split_signs(a);
  const auto [b_pos, b_neg] = split_signs(b);
  return otw_direct(a_pos.values(), b_pos.values(), p.m, s, p.beta) +
         otw_direct(a_neg.values(), b_neg.values(), p.m, s, p.beta);
}

std::pair<std::vector<double>, std::vector<double>> otw_grad(
    const TimeSeries& a, const TimeSeries& b, const OtwParams& p) {
  if (a.size() != b.size()) {
    throw DataError("otw_grad: series lengths differ (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  check_params(p);
  const std::size_t n = a.size();
  const std::size_t s = effective_window(p, n);
  std::vector<double> grad_a(n), grad_b(n);
  if (p.sign_strategy == SignStrategy::Direct) {
    otw_direct_grad(a.values(), b.values(), p.m, s, p.beta, grad_a);
    for (std::size_t j = 0; j < n; ++j) grad_b[j] = -grad_a[j];
    return {std::move(grad_a), std::move(grad_b)};
  }
  // Split: chain through the elementwise positive/negative part maps; an
  // inactive part contributes zero.
  const auto [a_pos, a_neg] = split_signs(a);
  const auto [b_pos, b_neg] = split_signs(b);
  std::vector<double> g_pos, g_neg;
  otw_direct_grad(a_pos.values(), b_pos.values(), p.m, s, p.beta, g_pos);
  otw_direct_grad(a_neg.values(), b_neg.values(), p.m, s, p.beta, g_neg);
  for (std::size_t j = 0; j < n; ++j) {
    grad_a[j] = (a[j] > 0.0 ? g_pos[j] : 0.0) + (a[j] < 0.0 ? -g_neg[j] : 0.0);
    grad_b[j] = (b[j] > 0.0 ? -g_pos[j] : 0.0) + (b[j] < 0.0 ? g_neg[j] : 0.0);
  }
  return {std::move(grad_a), std::move(grad_b)};
}

std::string Metric::tag() const {
  char buf[160];
  switch (kind) {
    case MetricKind::Otw: {
      char window[32];
      if (otw_params.s == 0) {
        std::snprintf(window, sizeof(window), "full");
      } else {
        std::snprintf(window, sizeof(window), "%zu", otw_params.s);
      }
      std::snprintf(buf, sizeof(buf), "otw(m=%g,s=%s,beta=%g,sign=%s)",
                    otw_params.m, window, otw_params.beta,
                    otw_params.sign_strategy == SignStrategy::Direct ? "direct" : "split");
      return buf;
    }
    case MetricKind::Dtw: {
      char window[32];
      if (dtw_params.window.has_value()) {
        std::snprintf(window, sizeof(window), "%zu", *dtw_params.window);
      } else {
        std::snprintf(window, sizeof(window), "unconstrained");
      }
      std::snprintf(buf, sizeof(buf), "dtw(window=%s,cost=%s)", window,
                    dtw_params.local_cost == LocalCost::SquaredDiff ? "sq" : "abs");
      return buf;
    }
    case MetricKind::L1:
      return "l1";
    case MetricKind::L2:
      return "l2";
  }
  return "unknown";
}

double metric_distance(const TimeSeries& a, const TimeSeries& b, const Metric& m) {
  switch (m.kind) {
    case MetricKind::Otw:
      return otw(a, b, m.otw_params);
    case MetricKind::Dtw:
      return dtw(a, b, m.dtw_params);
    case MetricKind::L1:
      return minkowski(a, b, 1);
    case MetricKind::L2:
      return minkowski(a, b, 2);
  }
  throw DataError("metric_distance: unknown metric kind");
}

DistanceMatrix::DistanceMatrix(std::size_t dim, std::string metric_tag)
    : dim_(dim), entries_(dim * dim, 0.0), tag_(std::move(metric_tag)) {
  if (dim == 0) throw DataError("DistanceMatrix: dimension must be >= 1");
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  entries_[i * dim_ + j] = value;
  entries_[j * dim_ + i] = value;
}

DistanceMatrix pairwise_matrix(const std::vector<TimeSeries>& series,
                               const Metric& metric, unsigned threads) {
  if (series.empty()) throw DataError("pairwise_matrix: no series given");
  const std::size_t n = series.size();
  for (const auto& s : series) {
    if (s.size() != series.front().size()) {
      throw DataError("pairwise_matrix: series lengths differ");
    }
  }
  DistanceMatrix out(n, metric.tag());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  // Each pair is written to a distinct cell, so the fan-out is race-free and
  // the result does not depend on the thread count.
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto [i, j] = pairs[k];
      out.set(i, j, metric_distance(series[i], series[j], metric));
    }
  };
  if (threads < 2 || pairs.size() < 2) {
    worker(0, pairs.size());
  } else {
    const std::size_t workers = std::min<std::size_t>(threads, pairs.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (pairs.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(begin + chunk, pairs.size());
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace otw
