#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otw/dtw.hpp"
#include "otw/series.hpp"

namespace otw {

enum class SignStrategy { Direct, Split };

// Configuration of the optimal-transport warping distance: waste cost m,
// trailing window s (clamped to the series length), smoothing beta (0 means
// the exact absolute value) and the strategy for signed inputs.
struct OtwParams {
  double m = 1.0;
  std::size_t s = 0;  // 0 or anything >= n means the full window
  double beta = 0.0;
  SignStrategy sign_strategy = SignStrategy::Direct;
};

// Smooth l1 loss: |x| for beta == 0, else x^2/(2 beta) for |x| < beta and
// |x| - beta/2 otherwise. Continuous at |x| == beta.
double smooth_l1(double x, double beta);

// Derivative of smooth_l1: x/beta for |x| < beta, sign(x) otherwise. For
// beta == 0 returns the subgradient sign(x) with sign(0) := 0.
double smooth_l1_deriv(double x, double beta);

// Optimal-transport warping distance between equal-length series:
// m * L_beta(A_s(n) - B_s(n)) + sum_{i<n} L_beta(A_s(i) - B_s(i)) where
// A_s, B_s are the trailing-window cumulative sums. The Split strategy
// applies the same form to the positive and negative parts and adds the two
// values. O(n) time.
double otw(const TimeSeries& a, const TimeSeries& b, const OtwParams& p);

// Analytic gradient of otw with respect to both inputs. For beta == 0 this
// is the subgradient with sign(0) := 0. O(n).
std::pair<std::vector<double>, std::vector<double>> otw_grad(
    const TimeSeries& a, const TimeSeries& b, const OtwParams& p);

enum class MetricKind { Otw, Dtw, L1, L2 };

// Descriptor of one distance function, used by the pairwise builder, the
// hyperparameter grid and the CLI.
struct Metric {
  MetricKind kind = MetricKind::Otw;
  OtwParams otw_params;
  DtwParams dtw_params;

  static Metric otw_metric(const OtwParams& p) { return {MetricKind::Otw, p, {}}; }
  static Metric dtw_metric(const DtwParams& p) { return {MetricKind::Dtw, {}, p}; }
  static Metric l1() { return {MetricKind::L1, {}, {}}; }
  static Metric l2() { return {MetricKind::L2, {}, {}}; }

  std::string tag() const;
};

// Evaluates the metric described by m on one pair.
double metric_distance(const TimeSeries& a, const TimeSeries& b, const Metric& m);

// Symmetric pairwise-distance storage with a record of the metric used.
class DistanceMatrix {
public:
  DistanceMatrix(std::size_t dim, std::string metric_tag);

  std::size_t dim() const { return dim_; }
  double at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double value);
  const std::string& metric_tag() const { return tag_; }
  const std::vector<double>& entries() const { return entries_; }

private:
  std::size_t dim_;
  std::vector<double> entries_;
  std::string tag_;
};

// Builds the full symmetric matrix; only the upper triangle is computed and
// mirrored. Pair jobs are independent and fan out over `threads` (values
// below 2 run sequentially); the result is identical for any thread count.
DistanceMatrix pairwise_matrix(const std::vector<TimeSeries>& series,
                               const Metric& metric, unsigned threads = 1);

}  // namespace otw
