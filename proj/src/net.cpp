#include "otw/net.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <thread>

#include "otw/dtw.hpp"
#include "otw/errors.hpp"
#include "otw/rng.hpp"

namespace otw {

namespace {

std::vector<double> gaussian_matrix(std::size_t rows, std::size_t cols, double stddev,
                                    Rng& rng) {
  std::vector<double> out(rows * cols);
  for (double& w : out) w = stddev * rng.normal();
  return out;
}

}  // namespace

FeatureLayer FeatureLayer::otw_layer(std::size_t k, std::size_t n, const OtwParams& p,
                                     std::uint64_t seed) {
  if (k < 1 || n < 1) throw DataError("otw_layer: k and n must be >= 1");
  FeatureLayer layer;
  layer.kind = LayerKind::Otw;
  layer.k = k;
  layer.n = n;
  Rng rng(seed);
  layer.weights = gaussian_matrix(k, n, 1.0, rng);
  layer.otw_params = p;
  return layer;
}

FeatureLayer FeatureLayer::dtw_layer(std::size_t k, std::size_t n, const DtwParams& p,
                                     std::uint64_t seed) {
  if (k < 1 || n < 1) throw DataError("dtw_layer: k and n must be >= 1");
  FeatureLayer layer;
  layer.kind = LayerKind::Dtw;
  layer.k = k;
  layer.n = n;
  Rng rng(seed);
  layer.weights = gaussian_matrix(k, n, 1.0, rng);
  layer.dtw_params = p;
  return layer;
}

FeatureLayer FeatureLayer::linear_layer(std::size_t k, std::size_t n, std::uint64_t seed) {
  if (k < 1 || n < 1) throw DataError("linear_layer: k and n must be >= 1");
  FeatureLayer layer;
  layer.kind = LayerKind::Linear;
  layer.k = k;
  layer.n = n;
  Rng rng(seed);
  layer.weights = gaussian_matrix(k, n, std::sqrt(2.0 / static_cast<double>(n)), rng);
  layer.bias.assign(k, 0.0);
  return layer;
}

namespace {

TimeSeries layer_row(const FeatureLayer& layer, std::size_t r) {
  return TimeSeries(std::vector<double>(layer.weights.begin() + r * layer.n,
                                        layer.weights.begin() + (r + 1) * layer.n));
}

// Full-table DTW that also returns the matched index pairs of the optimal
// path. Ties prefer diagonal, then the row predecessor, then the column
// one, so the traceback is deterministic.
double dtw_with_path(const std::vector<double>& a, const std::vector<double>& b,
                     const DtwParams& p,
                     std::vector<std::pair<std::size_t, std::size_t>>& path) {
  const std::size_t n = a.size();
  const std::size_t w = p.window.has_value() ? std::min(*p.window, n - 1) : n - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> table(n * n, inf);
  auto cost = [&](std::size_t i, std::size_t j) {
    const double d = a[i] - b[j];
    return p.local_cost == LocalCost::SquaredDiff ? d * d : std::fabs(d);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > w ? i - w : 0;
    const std::size_t hi = std::min(n - 1, i + w);
    for (std::size_t j = lo; j <= hi; ++j) {
      double best = (i == 0 && j == 0) ? 0.0 : inf;
      if (i > 0 && j > 0) best = std::min(best, table[(i - 1) * n + (j - 1)]);
      if (i > 0) best = std::min(best, table[(i - 1) * n + j]);
      if (j > 0) best = std::min(best, table[i * n + (j - 1)]);
      table[i * n + j] = cost(i, j) + best;
    }
  }
  path.clear();
  std::size_t i = n - 1, j = n - 1;
  path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const double diag = (i > 0 && j > 0) ? table[(i - 1) * n + (j - 1)] : inf;
    const double up = i > 0 ? table[(i - 1) * n + j] : inf;
    const double left = j > 0 ? table[i * n + (j - 1)] : inf;
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    path.emplace_back(i, j);
  }
  return table[(n - 1) * n + (n - 1)];
}

void check_layer_input(const TimeSeries& a, const FeatureLayer& layer) {
  if (a.size() != layer.n) {
    throw DataError("feature layer: input length " + std::to_string(a.size()) +
                    " does not match layer width " + std::to_string(layer.n));
  }
}

}  // namespace

std::vector<double> layer_forward(const TimeSeries& a, const FeatureLayer& layer) {
  check_layer_input(a, layer);
  std::vector<double> z(layer.k, 0.0);
  switch (layer.kind) {
    case LayerKind::Otw:
      for (std::size_t r = 0; r < layer.k; ++r) {
        z[r] = otw(a, layer_row(layer, r), layer.otw_params);
      }
      break;
    case LayerKind::Dtw:
      for (std::size_t r = 0; r < layer.k; ++r) {
        z[r] = dtw(a, layer_row(layer, r), layer.dtw_params);
      }
      break;
    case LayerKind::Linear:
      for (std::size_t r = 0; r < layer.k; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < layer.n; ++c) {
          acc += layer.weights[r * layer.n + c] * a[c];
        }
        z[r] = acc + layer.bias[r];
      }
      break;
  }
  return z;
}

LayerGrads layer_backward(const TimeSeries& a, const FeatureLayer& layer,
                          const std::vector<double>& upstream) {
  check_layer_input(a, layer);
  if (upstream.size() != layer.k) {
    throw DataError("feature layer: upstream gradient length mismatch");
  }
  LayerGrads grads;
  grads.weights.assign(layer.k * layer.n, 0.0);
  grads.input.assign(layer.n, 0.0);
  switch (layer.kind) {
    case LayerKind::Otw:
      for (std::size_t r = 0; r < layer.k; ++r) {
        const auto [ga, gb] = otw_grad(a, layer_row(layer, r), layer.otw_params);
        for (std::size_t c = 0; c < layer.n; ++c) {
          grads.weights[r * layer.n + c] = upstream[r] * gb[c];
          grads.input[c] += upstream[r] * ga[c];
        }
      }
      break;
    case LayerKind::Dtw:
      for (std::size_t r = 0; r < layer.k; ++r) {
        std::vector<std::pair<std::size_t, std::size_t>> path;
        const std::vector<double> row(layer.weights.begin() + r * layer.n,
                                      layer.weights.begin() + (r + 1) * layer.n);
        dtw_with_path(a.values(), row, layer.dtw_params, path);
        for (const auto& [i, j] : path) {
          const double d = a[i] - row[j];
          double da, db;
          if (layer.dtw_params.local_cost == LocalCost::SquaredDiff) {
            da = 2.0 * d;
            db = -2.0 * d;
          } else {
            da = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            db = -da;
          }
          grads.input[i] += upstream[r] * da;
          grads.weights[r * layer.n + j] += upstream[r] * db;
        }
      }
      break;
    case LayerKind::Linear:
      grads.bias.assign(layer.k, 0.0);
      for (std::size_t r = 0; r < layer.k; ++r) {
        grads.bias[r] = upstream[r];
        for (std::size_t c = 0; c < layer.n; ++c) {
          grads.weights[r * layer.n + c] = upstream[r] * a[c];
          grads.input[c] += upstream[r] * layer.weights[r * layer.n + c];
        }
      }
      break;
  }
  return grads;
}

MlpModel make_mlp(FeatureLayer feature, const std::vector<std::size_t>& hidden_sizes,
                  std::size_t classes, std::uint64_t seed) {
  if (classes < 2) throw DataError("make_mlp: need at least 2 classes");
  MlpModel model;
  model.feature = std::move(feature);
  model.feature_shift.assign(model.feature.k, 0.0);
  model.feature_scale.assign(model.feature.k, 1.0);
  model.classes = classes;
  Rng rng(seed ^ 0x6d6c702d696e6974ULL);
  std::size_t in = model.feature.k;
  for (std::size_t h : hidden_sizes) {
    if (h < 1) throw DataError("make_mlp: hidden sizes must be positive");
    DenseLayer layer;
    layer.in = in;
    layer.out = h;
    layer.weights = gaussian_matrix(h, in, std::sqrt(2.0 / static_cast<double>(in)), rng);
    layer.bias.assign(h, 0.0);
    model.dense.push_back(std::move(layer));
    in = h;
  }
  DenseLayer head;
  head.in = in;
  head.out = classes;
  head.weights = gaussian_matrix(classes, in, std::sqrt(2.0 / static_cast<double>(in)), rng);
  head.bias.assign(classes, 0.0);
  model.dense.push_back(std::move(head));
  return model;
}

namespace {

struct ForwardCache {
  std::vector<double> z;                   // standardized feature output
  std::vector<std::vector<double>> pre;    // per dense layer, before ReLU
  std::vector<std::vector<double>> post;   // per dense layer, after ReLU (last = logits)
};

void standardize_features(const MlpModel& model, std::vector<double>& z) {
  for (std::size_t r = 0; r < z.size(); ++r) {
    z[r] = (z[r] - model.feature_shift[r]) * model.feature_scale[r];
  }
}

void dense_forward(const MlpModel& model, ForwardCache& cache) {
  const std::vector<double>* input = &cache.z;
  cache.pre.resize(model.dense.size());
  cache.post.resize(model.dense.size());
  for (std::size_t l = 0; l < model.dense.size(); ++l) {
    const DenseLayer& layer = model.dense[l];
    auto& pre = cache.pre[l];
    pre.assign(layer.out, 0.0);
    for (std::size_t r = 0; r < layer.out; ++r) {
      double acc = layer.bias[r];
      for (std::size_t c = 0; c < layer.in; ++c) {
        acc += layer.weights[r * layer.in + c] * (*input)[c];
      }
      pre[r] = acc;
    }
    auto& post = cache.post[l];
    post = pre;
    if (l + 1 < model.dense.size()) {
      for (double& x : post) x = x > 0.0 ? x : 0.0;  // ReLU on hidden layers
    }
    input = &post;
  }
}

// Softmax cross-entropy; fills dlogits with p - onehot(label) and returns
// the loss.
double softmax_loss(const std::vector<double>& logits, std::size_t label,
                    std::vector<double>& dlogits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  dlogits.resize(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) {
    dlogits[c] = std::exp(logits[c] - peak);
    denom += dlogits[c];
  }
  for (double& x : dlogits) x /= denom;
  const double p = std::max(dlogits[label], 1e-300);
  const double loss = -std::log(p);
  dlogits[label] -= 1.0;
  return loss;
}

// All trainable parameter blocks of a model, in a fixed order.
std::vector<std::vector<double>*> parameter_blocks(MlpModel& model) {
  std::vector<std::vector<double>*> blocks;
  blocks.push_back(&model.feature.weights);
  if (model.feature.kind == LayerKind::Linear) blocks.push_back(&model.feature.bias);
  for (auto& layer : model.dense) {
    blocks.push_back(&layer.weights);
    blocks.push_back(&layer.bias);
  }
  return blocks;
}

struct Gradients {
  std::vector<std::vector<double>> blocks;

  explicit Gradients(const std::vector<std::vector<double>*>& params) {
    blocks.reserve(params.size());
    for (const auto* p : params) blocks.emplace_back(p->size(), 0.0);
  }

  void reset() {
    for (auto& b : blocks) std::fill(b.begin(), b.end(), 0.0);
  }

  void add_scaled(const Gradients& other, double scale) {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      for (std::size_t i = 0; i < blocks[k].size(); ++i) {
        blocks[k][i] += scale * other.blocks[k][i];
      }
    }
  }
};

// Forward + backward for one sample; writes the per-block gradients in the
// parameter_blocks order and returns the sample loss.
double sample_grad(const MlpModel& model, const TimeSeries& input, std::size_t label,
                   Gradients& out) {
  ForwardCache cache;
  cache.z = layer_forward(input, model.feature);
  standardize_features(model, cache.z);
  dense_forward(model, cache);

  std::vector<double> delta;
  const double loss = softmax_loss(cache.post.back(), label, delta);

  std::size_t block = out.blocks.size();
  // Dense layers, back to front.
  for (std::size_t l = model.dense.size(); l-- > 0;) {
    const DenseLayer& layer = model.dense[l];
    auto& gb = out.blocks[--block];
    auto& gw = out.blocks[--block];
    const std::vector<double>& in_act = l == 0 ? cache.z : cache.post[l - 1];
    std::vector<double> din(layer.in, 0.0);
    for (std::size_t r = 0; r < layer.out; ++r) {
      gb[r] = delta[r];
      for (std::size_t c = 0; c < layer.in; ++c) {
        gw[r * layer.in + c] = delta[r] * in_act[c];
        din[c] += layer.weights[r * layer.in + c] * delta[r];
      }
    }
    if (l > 0) {
      for (std::size_t c = 0; c < layer.in; ++c) {
        if (cache.pre[l - 1][c] <= 0.0) din[c] = 0.0;  // ReLU mask
      }
    }
    delta = std::move(din);
  }
  for (std::size_t r = 0; r < delta.size(); ++r) delta[r] *= model.feature_scale[r];
  const LayerGrads feature_grads = layer_backward(input, model.feature, delta);
  if (model.feature.kind == LayerKind::Linear) {
    out.blocks[--block] = feature_grads.bias;
  }
  out.blocks[--block] = feature_grads.weights;
  return loss;
}

class Adam {
public:
  Adam(const std::vector<std::vector<double>*>& params, double lr)
      : lr_(lr) {
    for (const auto* p : params) {
      m_.emplace_back(p->size(), 0.0);
      v_.emplace_back(p->size(), 0.0);
    }
  }

  void step(std::vector<std::vector<double>*>& params, const Gradients& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      auto& w = *params[k];
      const auto& g = grads.blocks[k];
      for (std::size_t i = 0; i < w.size(); ++i) {
        m_[k][i] = kBeta1 * m_[k][i] + (1.0 - kBeta1) * g[i];
        v_[k][i] = kBeta2 * v_[k][i] + (1.0 - kBeta2) * g[i] * g[i];
        const double mhat = m_[k][i] / bc1;
        const double vhat = v_[k][i] / bc2;
        w[i] -= lr_ * mhat / (std::sqrt(vhat) + kEps);
      }
    }
  }

private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

std::map<int, std::size_t> label_indexing(const LabeledDataset& data) {
  std::map<int, std::size_t> map;
  for (int label : data.labels) map.emplace(label, 0);
  std::size_t next = 0;
  for (auto& [label, index] : map) index = next++;
  return map;
}

}  // namespace

std::vector<double> mlp_logits(const MlpModel& model, const TimeSeries& a) {
  ForwardCache cache;
  cache.z = layer_forward(a, model.feature);
  standardize_features(model, cache.z);
  dense_forward(model, cache);
  return cache.post.back();
}

TrainHistory train(MlpModel& model, const LabeledDataset& train_data,
                   const LabeledDataset& test_data, const TrainOptions& options) {
  train_data.validate();
  test_data.validate();
  if (train_data.series_length() != model.feature.n ||
      test_data.series_length() != model.feature.n) {
    throw DataError("train: series length does not match the model input width");
  }
  const auto labels = label_indexing(train_data);
  if (labels.size() > model.classes) {
    throw DataError("train: dataset has more classes than the model output");
  }
  if (options.batch_size < 1) throw DataError("train: batch size must be >= 1");

  auto class_of = [&labels](int label) -> std::ptrdiff_t {
    const auto it = labels.find(label);
    return it == labels.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  };

  // Fit the feature standardization to the training set under the initial
  // weights so dense-layer thresholds start at unit scale.
  {
    const std::size_t k = model.feature.k;
    std::vector<double> mean(k, 0.0), var(k, 0.0);
    for (const auto& sample : train_data.series) {
      const auto z = layer_forward(sample, model.feature);
      for (std::size_t r = 0; r < k; ++r) mean[r] += z[r];
    }
    for (double& m : mean) m /= static_cast<double>(train_data.size());
    for (const auto& sample : train_data.series) {
      const auto z = layer_forward(sample, model.feature);
      for (std::size_t r = 0; r < k; ++r) {
        var[r] += (z[r] - mean[r]) * (z[r] - mean[r]);
      }
    }
    model.feature_shift = mean;
    for (std::size_t r = 0; r < k; ++r) {
      const double stddev = std::sqrt(var[r] / static_cast<double>(train_data.size()));
      model.feature_scale[r] = stddev > 1e-12 ? 1.0 / stddev : 1.0;
    }
  }

  auto params = parameter_blocks(model);
  Adam adam(params, options.learning_rate);
  Rng rng(options.seed);
  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Gradients> slots;
  const std::size_t max_batch = std::min<std::size_t>(options.batch_size, train_data.size());
  for (std::size_t s = 0; s < max_batch; ++s) slots.emplace_back(params);
  Gradients total(params);
  std::vector<double> slot_loss(max_batch, 0.0);

  TrainHistory history;
  history.seconds_to_zero_error = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += options.batch_size) {
      const std::size_t count = std::min(options.batch_size, order.size() - begin);
      auto run_sample = [&](std::size_t s) {
        const std::size_t item = order[begin + s];
        const std::ptrdiff_t cls = class_of(train_data.labels[item]);
        slot_loss[s] = sample_grad(model, train_data.series[item],
                                   static_cast<std::size_t>(cls), slots[s]);
      };
      if (options.threads < 2 || count < 2) {
        for (std::size_t s = 0; s < count; ++s) run_sample(s);
      } else {
        const std::size_t workers = std::min<std::size_t>(options.threads, count);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            for (std::size_t s = w; s < count; s += workers) run_sample(s);
          });
        }
        for (auto& t : pool) t.join();
      }
      // Deterministic reduction in sample order regardless of thread count.
      total.reset();
      const double scale = 1.0 / static_cast<double>(count);
      for (std::size_t s = 0; s < count; ++s) {
        total.add_scaled(slots[s], scale);
        loss_sum += slot_loss[s];
      }
      if (!std::isfinite(loss_sum)) {
        throw DataError("train: non-finite loss at epoch " + std::to_string(epoch) +
                        ", batch starting at sample " + std::to_string(begin));
      }
      adam.step(params, total);
    }

    std::size_t wrong = 0;
    for (std::size_t t = 0; t < test_data.size(); ++t) {
      const auto logits = mlp_logits(model, test_data.series[t]);
      const std::size_t predicted = static_cast<std::size_t>(
          std::max_element(logits.begin(), logits.end()) - logits.begin());
      if (static_cast<std::ptrdiff_t>(predicted) != class_of(test_data.labels[t])) {
        ++wrong;
      }
    }
    const double test_error = static_cast<double>(wrong) / static_cast<double>(test_data.size());

    EpochRecord record;
    record.epoch = epoch;
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    record.train_loss = loss_sum / static_cast<double>(train_data.size());
    record.test_error = test_error;
    record.min_test_error = history.epochs.empty()
                                ? test_error
                                : std::min(history.epochs.back().min_test_error, test_error);
    if (record.min_test_error == 0.0 &&
        !std::isfinite(history.seconds_to_zero_error) && test_error == 0.0) {
      history.seconds_to_zero_error = record.wall_seconds;
    }
    history.epochs.push_back(record);
  }
  return history;
}

LabeledDataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.length < 1 || spec.samples_per_class < 1 || spec.pulse_width < 1) {
    throw DataError("make_synthetic: sizes must be positive");
  }
  for (std::size_t offset : {spec.left_offset, spec.right_offset}) {
    if (offset + spec.pulse_width > spec.length) {
      throw DataError("make_synthetic: pulse at offset " + std::to_string(offset) +
                      " does not fit in length " + std::to_string(spec.length));
    }
  }
  LabeledDataset data;
  data.name = "synthetic";
  Rng rng(spec.seed);
  for (int label = 0; label < 4; ++label) {
    const TimeSeries prototype = synthetic_prototype(label, spec);
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      std::vector<double> values = prototype.values();
      if (spec.noise_sigma > 0.0) {
        for (double& v : values) v += spec.noise_sigma * rng.normal();
      }
      data.series.emplace_back(std::move(values));
      data.labels.push_back(label);
    }
  }
  return data;
}

TimeSeries synthetic_prototype(int label, const SyntheticSpec& spec) {
  if (label < 0 || label > 3) throw DataError("synthetic_prototype: label must be 0..3");
  const bool square = label < 2;              // 0,1: square; 2,3: triangle
  const bool left = (label % 2) == 0;         // even: left; odd: right
  const std::size_t offset = left ? spec.left_offset : spec.right_offset;
  std::vector<double> values(spec.length, 0.0);
  const double mid = static_cast<double>(spec.pulse_width - 1) / 2.0;
  for (std::size_t j = 0; j < spec.pulse_width; ++j) {
    if (square) {
      values[offset + j] = spec.pulse_height;
    } else {
      values[offset + j] =
          spec.pulse_height * (1.0 - std::fabs(static_cast<double>(j) - mid) / (mid + 1.0));
    }
  }
  return TimeSeries(std::move(values));
}

std::pair<LabeledDataset, LabeledDataset> stratified_prefix_split(
    const LabeledDataset& data, double fraction) {
  data.validate();
  if (fraction <= 0.0 || fraction >= 1.0) {
    throw DataError("stratified_prefix_split: fraction must be in (0, 1)");
  }
  std::map<int, std::size_t> class_counts;
  for (int label : data.labels) ++class_counts[label];
  std::map<int, std::size_t> take;
  for (const auto& [label, count] : class_counts) {
    take[label] = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(count) + 0.5));
  }
  LabeledDataset head{{}, {}, data.name + "/train"};
  LabeledDataset tail{{}, {}, data.name + "/test"};
  std::map<int, std::size_t> seen;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int label = data.labels[i];
    auto& part = seen[label]++ < take[label] ? head : tail;
    part.series.push_back(data.series[i]);
    part.labels.push_back(label);
  }
  return {std::move(head), std::move(tail)};
}

}  // namespace otw
