#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "otw/dataset.hpp"
#include "otw/distance.hpp"

namespace otw {

enum class LayerKind { Otw, Dtw, Linear };

// First network layer: k trainable reference rows of length n. For the
// distance kinds the outputs are the k distances from the input to the
// rows; Linear is the ordinary affine map (the fully-connected baseline).
struct FeatureLayer {
  LayerKind kind = LayerKind::Linear;
  std::size_t k = 1;
  std::size_t n = 0;
  std::vector<double> weights;  // k x n row-major
  std::vector<double> bias;     // k, Linear only
  OtwParams otw_params;         // beta > 0 when trained
  DtwParams dtw_params;

  static FeatureLayer otw_layer(std::size_t k, std::size_t n, const OtwParams& p,
                                std::uint64_t seed);
  static FeatureLayer dtw_layer(std::size_t k, std::size_t n, const DtwParams& p,
                                std::uint64_t seed);
  static FeatureLayer linear_layer(std::size_t k, std::size_t n, std::uint64_t seed);
};

// Outputs z, length k. O(k n) for Otw/Linear, O(k n^2) for Dtw.
std::vector<double> layer_forward(const TimeSeries& a, const FeatureLayer& layer);

struct LayerGrads {
  std::vector<double> weights;  // k x n
  std::vector<double> bias;     // k, Linear only
  std::vector<double> input;    // n
};

// Gradients of upstream . z with respect to the layer weights and the
// input. Otw uses the analytic gradient; Dtw routes a subgradient along the
// optimal warping path (ties broken deterministically); Linear is exact.
LayerGrads layer_backward(const TimeSeries& a, const FeatureLayer& layer,
                          const std::vector<double>& upstream);

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in
  std::vector<double> bias;     // out
};

// Feature layer followed by ReLU-activated dense layers and a softmax
// cross-entropy output head. Feature outputs pass through a fixed affine
// standardization (identity until train() fits it to the training set's
// initial feature statistics); distance features can sit in the hundreds,
// far outside the range Adam-scale steps can reach otherwise.
struct MlpModel {
  FeatureLayer feature;
  std::vector<double> feature_shift;  // k, subtracted from z
  std::vector<double> feature_scale;  // k, multiplied after the shift
  std::vector<DenseLayer> dense;      // hidden layers then the output layer
  std::size_t classes = 0;
};

MlpModel make_mlp(FeatureLayer feature, const std::vector<std::size_t>& hidden_sizes,
                  std::size_t classes, std::uint64_t seed);

// Class scores (pre-softmax logits) for one input.
std::vector<double> mlp_logits(const MlpModel& model, const TimeSeries& a);

// Four balanced classes on a zero baseline: {square, triangle} pulse shape
// at {left, right} offset, plus Gaussian noise. Labels 0..3 in that order.
struct SyntheticSpec {
  std::size_t length = 128;
  std::size_t samples_per_class = 100;
  std::size_t pulse_width = 16;
  std::size_t left_offset = 16;
  std::size_t right_offset = 96;
  double pulse_height = 1.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

LabeledDataset make_synthetic(const SyntheticSpec& spec);

// Noiseless class prototype; label is the class id in [0, 4).
TimeSeries synthetic_prototype(int label, const SyntheticSpec& spec);

// Per-class prefix split: the first round(fraction * per-class count) items
// of every class go to the first set.
std::pair<LabeledDataset, LabeledDataset> stratified_prefix_split(
    const LabeledDataset& data, double fraction);

struct TrainOptions {
  std::size_t epochs = 500;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct EpochRecord {
  std::size_t epoch = 0;       // 1-based
  double wall_seconds = 0.0;   // cumulative since training started
  double train_loss = 0.0;     // mean cross-entropy over the epoch
  double test_error = 0.0;
  double min_test_error = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  // Cumulative wall-clock at the first epoch whose test error hit zero;
  // infinity if that never happened.
  double seconds_to_zero_error = 0.0;
};

// Mini-batch Adam (beta1 0.9, beta2 0.999, eps 1e-8) on softmax
// cross-entropy. Batch samples fan out over `threads`; per-sample gradients
// are reduced in sample order, so the result does not depend on the thread
// count, and a fixed seed reproduces the run bitwise.
TrainHistory train(MlpModel& model, const LabeledDataset& train_data,
                   const LabeledDataset& test_data, const TrainOptions& options);

}  // namespace otw
