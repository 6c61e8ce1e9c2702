#include "otw/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <thread>

#include "otw/errors.hpp"
#include "otw/rng.hpp"

namespace otw {

void LabeledDataset::validate() const {
  if (series.empty()) throw DataError("dataset '" + name + "' is empty");
  if (series.size() != labels.size()) {
    throw DataError("dataset '" + name + "': series/label count mismatch");
  }
  const std::size_t n = series.front().size();
  for (const auto& s : series) {
    if (s.size() != n) {
      throw DataError("dataset '" + name + "': series lengths differ");
    }
  }
}

std::size_t LabeledDataset::distinct_classes() const {
  return std::set<int>(labels.begin(), labels.end()).size();
}

namespace {

std::vector<std::size_t> dedup_sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void run_indexed(std::size_t count, unsigned threads,
                 const std::function<void(std::size_t)>& job) {
  if (threads < 2 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(begin + chunk, count);
    if (begin < end) {
      pool.emplace_back([&job, begin, end] {
        for (std::size_t i = begin; i < end; ++i) job(i);
      });
    }
  }
  for (auto& t : pool) t.join();
}

}  // namespace

HyperGrid HyperGrid::default_otw(std::size_t n) {
  const double ms[] = {0.1, 1.0, 10.0};
  auto windows = dedup_sorted({1,
                               (n + 7) / 8,
                               (n + 3) / 4,
                               (n + 1) / 2,
                               n});
  HyperGrid grid;
  for (SignStrategy sign : {SignStrategy::Direct, SignStrategy::Split}) {
    for (double m : ms) {
      for (std::size_t s : windows) {
        OtwParams p;
        p.m = m;
        p.s = s;
        p.beta = 0.0;
        p.sign_strategy = sign;
        grid.cells.push_back(Metric::otw_metric(p));
      }
    }
  }
  return grid;
}

HyperGrid HyperGrid::default_dtw(std::size_t n) {
  auto radii = dedup_sorted({0,
                             (n + 19) / 20,
                             (n + 9) / 10,
                             (n + 4) / 5,
                             n - 1});
  HyperGrid grid;
  for (std::size_t r : radii) {
    DtwParams p;
    p.window = r;
    p.local_cost = LocalCost::SquaredDiff;
    grid.cells.push_back(Metric::dtw_metric(p));
  }
  return grid;
}

OneNnResult one_nn_classify(const LabeledDataset& train, const LabeledDataset& test,
                            const Metric& metric, unsigned threads) {
  train.validate();
  test.validate();
  if (train.series_length() != test.series_length()) {
    throw DataError("one_nn_classify: train/test series lengths differ");
  }
  OneNnResult out;
  out.predictions.assign(test.size(), 0);
  run_indexed(test.size(), threads, [&](std::size_t t) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const double d = metric_distance(test.series[t], train.series[i], metric);
      if (d < best) {  // strict: ties keep the lowest training index
        best = d;
        best_index = i;
      }
    }
    out.predictions[t] = train.labels[best_index];
  });
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < test.size(); ++t) {
    if (out.predictions[t] != test.labels[t]) ++wrong;
  }
  out.error_rate = static_cast<double>(wrong) / static_cast<double>(test.size());
  return out;
}

SelectedParams select_params(const LabeledDataset& train, const HyperGrid& grid,
                             std::uint64_t seed, unsigned threads) {
  train.validate();
  if (grid.cells.empty()) throw DataError("select_params: empty grid");
  if (train.size() < 5) {
    throw DataError("select_params: need at least 5 training items, have " +
                    std::to_string(train.size()));
  }
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t holdout = std::max<std::size_t>(1, train.size() / 5);
  LabeledDataset fit{{}, {}, train.name + "/fit"};
  LabeledDataset val{{}, {}, train.name + "/val"};
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& part = k < holdout ? val : fit;
    part.series.push_back(train.series[order[k]]);
    part.labels.push_back(train.labels[order[k]]);
  }

  std::vector<double> accuracy(grid.cells.size(), 0.0);
  run_indexed(grid.cells.size(), threads, [&](std::size_t c) {
    accuracy[c] = 1.0 - one_nn_classify(fit, val, grid.cells[c]).error_rate;
  });

  SelectedParams best;
  best.metric = grid.cells[0];
  best.grid_index = 0;
  best.validation_accuracy = accuracy[0];
  for (std::size_t c = 1; c < grid.cells.size(); ++c) {
    if (accuracy[c] > best.validation_accuracy) {  // ties keep grid order
      best.metric = grid.cells[c];
      best.grid_index = c;
      best.validation_accuracy = accuracy[c];
    }
  }
  return best;
}

std::vector<int> agglomerative_cluster(const DistanceMatrix& distances, std::size_t k,
                                       Linkage linkage) {
  const std::size_t n = distances.dim();
  if (k < 1 || k > n) {
    throw DataError("agglomerative_cluster: k must be in [1, " + std::to_string(n) + "]");
  }
  // Active clusters keyed by their smallest member index; merging by
  // Lance-Williams keeps every step O(n) after the O(n^2) pair scan.
  std::vector<double> d(distances.entries());
  std::vector<std::size_t> sizes(n, 1);
  std::vector<char> active(n, 1);
  std::vector<int> member(n);  // item -> current cluster key
  std::iota(member.begin(), member.end(), 0);

  for (std::size_t clusters = n; clusters > k; --clusters) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double dist = d[i * n + j];
        if (dist < best) {  // strict: ties keep the smallest (i, j)
          best = dist;
          bi = i;
          bj = j;
        }
      }
    }
    // Merge bj into bi (bi < bj, so the key stays the smallest member).
    for (std::size_t other = 0; other < n; ++other) {
      if (!active[other] || other == bi || other == bj) continue;
      const double di = d[bi * n + other];
      const double dj = d[bj * n + other];
      double merged;
      switch (linkage) {
        case Linkage::Single:
          merged = std::min(di, dj);
          break;
        case Linkage::Complete:
          merged = std::max(di, dj);
          break;
        case Linkage::Average:
        default:
          merged = (static_cast<double>(sizes[bi]) * di +
                    static_cast<double>(sizes[bj]) * dj) /
                   static_cast<double>(sizes[bi] + sizes[bj]);
          break;
      }
      d[bi * n + other] = merged;
      d[other * n + bi] = merged;
    }
    sizes[bi] += sizes[bj];
    active[bj] = 0;
    for (std::size_t item = 0; item < n; ++item) {
      if (member[item] == static_cast<int>(bj)) member[item] = static_cast<int>(bi);
    }
  }

  // Renumber surviving keys to 0..k-1 in order of smallest member.
  std::vector<int> key_to_label(n, -1);
  int next = 0;
  std::vector<int> labels(n);
  for (std::size_t item = 0; item < n; ++item) {
    const int key = member[item];
    if (key_to_label[key] == -1) key_to_label[key] = next++;
    labels[item] = key_to_label[key];
  }
  return labels;
}

double rand_index(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    throw DataError("rand_index: label lengths differ");
  }
  if (truth.size() < 2) throw DataError("rand_index: need at least 2 items");
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      const bool same_truth = truth[i] == truth[j];
      const bool same_pred = predicted[i] == predicted[j];
      if (same_truth == same_pred) ++agree;
      ++total;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace otw
