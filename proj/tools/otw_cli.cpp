// Command-line surface: distance evaluation, 1-NN benchmarking, clustering,
// property verification, scaling benchmarks, synthetic data and training.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "otw/bench.hpp"
#include "otw/dataset.hpp"
#include "otw/distance.hpp"
#include "otw/dtw.hpp"
#include "otw/errors.hpp"
#include "otw/eval.hpp"
#include "otw/io.hpp"
#include "otw/net.hpp"
#include "otw/series.hpp"
#include "otw/verify.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSweepFailure = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Shared metric flags. "Provided" tracking lets knn keep default grid
// dimensions the user did not pin.
struct MetricFlags {
  std::string metric = "otw";
  double m = 1.0;
  std::size_t s = 0;
  double beta = 0.0;
  std::string sign = "direct";
  std::int64_t window = -1;  // -1: unconstrained
  std::string dtw_cost = "sq";

  bool m_set = false, s_set = false, beta_set = false, sign_set = false, window_set = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--metric", metric, "Distance: otw, dtw, l1 or l2")
        ->check(CLI::IsMember({"otw", "dtw", "l1", "l2"}));
    cmd->add_option("--m", m, "Waste cost for otw")->each([this](const std::string&) {
      m_set = true;
    });
    cmd->add_option("--s", s, "Window for otw (0 = full)")->each([this](const std::string&) {
      s_set = true;
    });
    cmd->add_option("--beta", beta, "Smoothing beta for otw (0 = exact)")
        ->each([this](const std::string&) { beta_set = true; });
    cmd->add_option("--sign", sign, "Sign strategy for otw: direct or split")
        ->check(CLI::IsMember({"direct", "split"}))
        ->each([this](const std::string&) { sign_set = true; });
    cmd->add_option("--window", window, "Band radius for dtw (-1 = unconstrained)")
        ->each([this](const std::string&) { window_set = true; });
    cmd->add_option("--dtw-cost", dtw_cost, "Local cost for dtw: sq or abs")
        ->check(CLI::IsMember({"sq", "abs"}));
  }

  otw::OtwParams otw_params() const {
    otw::OtwParams p;
    p.m = m;
    p.s = s;
    p.beta = beta;
    p.sign_strategy = sign == "split" ? otw::SignStrategy::Split : otw::SignStrategy::Direct;
    return p;
  }

  otw::DtwParams dtw_params() const {
    otw::DtwParams p;
    if (window >= 0) p.window = static_cast<std::size_t>(window);
    p.local_cost = dtw_cost == "abs" ? otw::LocalCost::AbsDiff : otw::LocalCost::SquaredDiff;
    return p;
  }

  otw::Metric build() const {
    if (metric == "otw") return otw::Metric::otw_metric(otw_params());
    if (metric == "dtw") return otw::Metric::dtw_metric(dtw_params());
    if (metric == "l1") return otw::Metric::l1();
    return otw::Metric::l2();
  }
};

struct CommonFlags {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool normalize = false;
  std::string out;
  std::string format = "json";

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Seed for every random choice");
    cmd->add_option("--threads", threads, "Worker threads for pair/grid fan-out");
    cmd->add_flag("--normalize", normalize, "z-normalize every series after loading");
    cmd->add_option("--out", out, "Write the report (without timing fields) to this path");
    cmd->add_option("--format", format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  }
};

otw::LabeledDataset load_dataset(const std::string& path, bool normalize, bool csv) {
  auto data = otw::read_ucr_tsv(path, csv ? ',' : '\t');
  if (normalize) {
    for (auto& s : data.series) s = otw::z_normalize(s);
  }
  return data;
}

// Removes volatile timing fields so --out files are byte-stable across runs.
void strip_timing(json& node) {
  if (node.is_object()) {
    node.erase("wall_seconds");
    node.erase("seconds_to_zero_error");
    for (auto& [key, value] : node.items()) strip_timing(value);
  } else if (node.is_array()) {
    for (auto& value : node) strip_timing(value);
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw otw::DataError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw otw::DataError("failed while writing '" + path + "'");
}

void emit_report(const json& report, const std::string& csv_text,
                 const CommonFlags& common) {
  if (common.format == "csv") {
    std::cout << csv_text;
  } else {
    std::cout << report.dump(2) << "\n";
  }
  if (!common.out.empty()) {
    if (common.format == "csv") {
      write_text(common.out, csv_text);
    } else {
      json stripped = report;
      strip_timing(stripped);
      write_text(common.out, stripped.dump(2) + "\n");
    }
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Two-sided 97.5% Student-t quantiles for small samples; 1.96 beyond the table.
double t_quantile_975(std::size_t df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                 2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                 2.131,  2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
                                 2.074,  2.069, 2.064, 2.060, 2.056, 2.052, 2.048,
                                 2.045,  2.042};
  if (df == 0) return 0.0;
  if (df <= 30) return table[df - 1];
  return 1.96;
}

std::vector<double> parse_inline_series(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) {
    try {
      std::size_t consumed = 0;
      values.push_back(std::stod(field, &consumed));
      if (consumed != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw otw::DataError("bad inline value '" + field + "'");
    }
  }
  if (values.empty()) throw otw::DataError("empty inline series");
  return values;
}

// ---------------------------------------------------------------------------
// dist

int cmd_dist(const MetricFlags& metric_flags, const CommonFlags& common,
             const std::string& inline_a, const std::string& inline_b,
             const std::string& input, std::size_t row_i, std::size_t row_j, bool csv_in) {
  otw::TimeSeries a({0.0}), b({0.0});
  if (!inline_a.empty() || !inline_b.empty()) {
    if (inline_a.empty() || inline_b.empty()) {
      throw otw::DataError("--a and --b must be given together");
    }
    a = otw::TimeSeries(parse_inline_series(inline_a));
    b = otw::TimeSeries(parse_inline_series(inline_b));
    if (common.normalize) {
      a = otw::z_normalize(a);
      b = otw::z_normalize(b);
    }
  } else if (!input.empty()) {
    const auto data = load_dataset(input, common.normalize, csv_in);
    if (row_i >= data.size() || row_j >= data.size()) {
      throw otw::DataError("row index out of range (dataset has " +
                           std::to_string(data.size()) + " rows)");
    }
    a = data.series[row_i];
    b = data.series[row_j];
  } else {
    throw otw::DataError("give either --a/--b or --input with --i/--j");
  }

  const auto metric = metric_flags.build();
  const auto start = Clock::now();
  const double value = otw::metric_distance(a, b, metric);
  const double elapsed = seconds_since(start);

  json report;
  report["command"] = "dist";
  report["metric"] = metric.tag();
  report["n"] = a.size();
  report["value"] = value;
  report["wall_seconds"] = elapsed;

  std::string csv_text = "metric,n,value\n" + metric.tag() + "," +
                         std::to_string(a.size()) + "," + format_double(value) + "\n";
  emit_report(report, csv_text, common);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// knn

otw::HyperGrid build_grid(const MetricFlags& flags, std::size_t n) {
  otw::HyperGrid grid;
  if (flags.metric == "l1") {
    grid.cells.push_back(otw::Metric::l1());
    return grid;
  }
  if (flags.metric == "l2") {
    grid.cells.push_back(otw::Metric::l2());
    return grid;
  }
  if (flags.metric == "dtw") {
    if (flags.window_set) {
      grid.cells.push_back(otw::Metric::dtw_metric(flags.dtw_params()));
    } else {
      grid = otw::HyperGrid::default_dtw(n);
    }
    return grid;
  }
  // otw: pinned flags collapse their grid dimension.
  const auto defaults = otw::HyperGrid::default_otw(n);
  for (const auto& cell : defaults.cells) {
    auto p = cell.otw_params;
    if (flags.m_set) p.m = flags.m;
    if (flags.s_set) p.s = flags.s;
    if (flags.beta_set) p.beta = flags.beta;
    if (flags.sign_set) {
      p.sign_strategy =
          flags.sign == "split" ? otw::SignStrategy::Split : otw::SignStrategy::Direct;
    }
    const auto candidate = otw::Metric::otw_metric(p);
    bool duplicate = false;
    for (const auto& existing : grid.cells) {
      if (existing.tag() == candidate.tag()) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) grid.cells.push_back(candidate);
  }
  return grid;
}

int cmd_knn(const MetricFlags& metric_flags, const CommonFlags& common,
            const std::string& train_path, const std::string& test_path,
            std::size_t repeats, bool csv_in) {
  const auto train_set = load_dataset(train_path, common.normalize, csv_in);
  const auto test_set = load_dataset(test_path, common.normalize, csv_in);
  const auto grid = build_grid(metric_flags, train_set.series_length());

  const auto start = Clock::now();
  json runs = json::array();
  std::vector<double> errors;
  for (std::size_t r = 0; r < repeats; ++r) {
    const std::uint64_t run_seed = common.seed + r;
    const auto best = otw::select_params(train_set, grid, run_seed, common.threads);
    const auto result = otw::one_nn_classify(train_set, test_set, best.metric, common.threads);
    errors.push_back(result.error_rate);
    json run;
    run["seed"] = run_seed;
    run["params"] = best.metric.tag();
    run["validation_accuracy"] = best.validation_accuracy;
    run["test_error"] = result.error_rate;
    runs.push_back(std::move(run));
  }

  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= static_cast<double>(errors.size());
  double var = 0.0;
  for (double e : errors) var += (e - mean) * (e - mean);
  double half_width = 0.0;
  if (errors.size() > 1) {
    const double sd = std::sqrt(var / static_cast<double>(errors.size() - 1));
    half_width = t_quantile_975(errors.size() - 1) * sd /
                 std::sqrt(static_cast<double>(errors.size()));
  }

  json report;
  report["command"] = "knn";
  report["train"] = train_set.name;
  report["test"] = test_set.name;
  report["metric_family"] = metric_flags.metric;
  report["grid_cells"] = grid.cells.size();
  report["repeats"] = repeats;
  report["runs"] = runs;
  report["mean_test_error"] = mean;
  report["ci95_half_width"] = half_width;
  report["wall_seconds"] = seconds_since(start);

  std::string csv_text = "run,seed,params,validation_accuracy,test_error\n";
  for (std::size_t r = 0; r < errors.size(); ++r) {
    csv_text += std::to_string(r) + "," + runs[r]["seed"].dump() + "," +
                runs[r]["params"].get<std::string>() + "," +
                format_double(runs[r]["validation_accuracy"].get<double>()) + "," +
                format_double(errors[r]) + "\n";
  }
  csv_text += "mean,,,," + format_double(mean) + "\n";
  csv_text += "ci95_half_width,,,," + format_double(half_width) + "\n";
  emit_report(report, csv_text, common);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cluster

int cmd_cluster(const std::vector<std::string>& metric_names, const MetricFlags& metric_flags,
                const CommonFlags& common, const std::string& input, std::size_t k_override,
                std::size_t max_samples, const std::string& linkage_name, bool csv_in) {
  auto data = load_dataset(input, common.normalize, csv_in);
  if (data.size() > max_samples) {
    throw otw::DataError("dataset has " + std::to_string(data.size()) +
                         " samples, above the cap of " + std::to_string(max_samples) +
                         " (raise --max-samples to override)");
  }
  const std::size_t k = k_override > 0 ? k_override : data.distinct_classes();
  otw::Linkage linkage = otw::Linkage::Average;
  if (linkage_name == "single") linkage = otw::Linkage::Single;
  if (linkage_name == "complete") linkage = otw::Linkage::Complete;

  std::vector<otw::Metric> metrics;
  for (const auto& name : metric_names) {
    MetricFlags flags = metric_flags;
    flags.metric = name;
    metrics.push_back(flags.build());
  }
  if (metrics.empty()) metrics.push_back(metric_flags.build());

  json results = json::array();
  std::string csv_text = "metric,k,rand_index\n";
  for (const auto& metric : metrics) {
    const auto start = Clock::now();
    const auto matrix = otw::pairwise_matrix(data.series, metric, common.threads);
    const auto labels = otw::agglomerative_cluster(matrix, k, linkage);
    const double ri = otw::rand_index(data.labels, labels);
    const double elapsed = seconds_since(start);
    json entry;
    entry["metric"] = metric.tag();
    entry["k"] = k;
    entry["rand_index"] = ri;
    entry["wall_seconds"] = elapsed;
    results.push_back(std::move(entry));
    csv_text += metric.tag() + "," + std::to_string(k) + "," + format_double(ri) + "\n";
  }

  json report;
  report["command"] = "cluster";
  report["dataset"] = data.name;
  report["samples"] = data.size();
  report["k"] = k;
  report["linkage"] = linkage_name;
  report["results"] = results;
  emit_report(report, csv_text, common);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const CommonFlags& common) {
  const auto start = Clock::now();
  const auto sweeps = otw::run_all_sweeps(common.seed);
  bool all_pass = true;

  json entries = json::array();
  std::string csv_text = "sweep,instances,passes,max_violation,slack_min,slack_mean,slack_max\n";
  for (const auto& sweep : sweeps) {
    all_pass = all_pass && sweep.all_pass();
    json entry;
    entry["name"] = sweep.name;
    entry["instances"] = sweep.instances;
    entry["passes"] = sweep.passes;
    entry["max_violation"] = sweep.max_violation;
    entry["slack_min"] = sweep.slack_min;
    entry["slack_mean"] = sweep.slack_mean;
    entry["slack_max"] = sweep.slack_max;
    entries.push_back(std::move(entry));
    csv_text += sweep.name + "," + std::to_string(sweep.instances) + "," +
                std::to_string(sweep.passes) + "," + format_double(sweep.max_violation) + "," +
                format_double(sweep.slack_min) + "," + format_double(sweep.slack_mean) + "," +
                format_double(sweep.slack_max) + "\n";
  }

  json report;
  report["command"] = "verify";
  report["seed"] = common.seed;
  report["sweeps"] = entries;
  report["all_pass"] = all_pass;
  report["wall_seconds"] = seconds_since(start);
  emit_report(report, csv_text, common);
  if (!all_pass) {
    std::cerr << "property sweep failure\n";
    return kExitSweepFailure;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const CommonFlags& common, std::size_t min_n, std::size_t max_n,
              std::size_t reps, bool layers, std::size_t layer_max_n) {
  otw::BenchOptions options;
  options.min_n = min_n;
  options.max_n = max_n;
  options.repetitions = reps;
  options.seed = common.seed;
  options.include_layers = layers;
  options.layer_max_n = layer_max_n;
  const auto bench = otw::run_bench(options);

  json records = json::array();
  std::string csv_text = "metric,n,repetitions,median_seconds,throughput_per_second\n";
  for (const auto& record : bench.records) {
    json entry;
    entry["metric"] = record.metric;
    entry["n"] = record.n;
    entry["repetitions"] = record.repetitions;
    entry["median_seconds"] = record.median_seconds;
    entry["throughput_per_second"] = record.throughput_per_second;
    records.push_back(std::move(entry));
    csv_text += record.metric + "," + std::to_string(record.n) + "," +
                std::to_string(record.repetitions) + "," +
                format_double(record.median_seconds) + "," +
                format_double(record.throughput_per_second) + "\n";
  }
  json slopes;
  for (const auto& [name, slope] : bench.slopes) {
    slopes[name] = slope;
    csv_text += "slope," + name + ",," + format_double(slope) + ",\n";
  }

  json report;
  report["command"] = "bench";
  report["min_n"] = min_n;
  report["max_n"] = max_n;
  report["records"] = records;
  report["slopes"] = slopes;

  // Bench output is timing by definition; --out keeps it intact.
  if (common.format == "csv") {
    std::cout << csv_text;
  } else {
    std::cout << report.dump(2) << "\n";
  }
  if (!common.out.empty()) {
    write_text(common.out, common.format == "csv" ? csv_text : report.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const CommonFlags& common, otw::SyntheticSpec spec, double train_fraction,
              const std::string& out_prefix) {
  spec.seed = common.seed;
  const auto data = otw::make_synthetic(spec);
  const auto [train_set, test_set] = otw::stratified_prefix_split(data, train_fraction);
  const std::string train_path = out_prefix + "_train.tsv";
  const std::string test_path = out_prefix + "_test.tsv";
  otw::write_ucr_tsv(train_set, train_path);
  otw::write_ucr_tsv(test_set, test_path);

  json report;
  report["command"] = "synth";
  report["length"] = spec.length;
  report["samples_per_class"] = spec.samples_per_class;
  report["noise_sigma"] = spec.noise_sigma;
  report["seed"] = spec.seed;
  report["train_file"] = train_path;
  report["train_samples"] = train_set.size();
  report["test_file"] = test_path;
  report["test_samples"] = test_set.size();
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

int cmd_train(const MetricFlags& metric_flags, const CommonFlags& common,
              const std::string& layer_kind, std::size_t k,
              const std::vector<std::size_t>& hidden, std::size_t epochs, double lr,
              std::size_t batch, const std::string& train_path, const std::string& test_path,
              otw::SyntheticSpec spec, double synth_noise, double train_fraction,
              const std::string& history_path, bool csv_in) {
  otw::LabeledDataset train_set, test_set;
  if (!train_path.empty()) {
    if (test_path.empty()) throw otw::DataError("--test-data is required with --train-data");
    train_set = load_dataset(train_path, common.normalize, csv_in);
    test_set = load_dataset(test_path, common.normalize, csv_in);
  } else {
    spec.noise_sigma = synth_noise;
    spec.seed = common.seed;
    const auto data = otw::make_synthetic(spec);
    auto split = otw::stratified_prefix_split(data, train_fraction);
    train_set = std::move(split.first);
    test_set = std::move(split.second);
  }

  const std::size_t n = train_set.series_length();
  otw::FeatureLayer layer;
  if (layer_kind == "otw") {
    auto params = metric_flags.otw_params();
    if (params.beta <= 0.0) params.beta = 0.1;  // training needs a smooth loss
    layer = otw::FeatureLayer::otw_layer(k, n, params, common.seed + 1);
  } else if (layer_kind == "dtw") {
    layer = otw::FeatureLayer::dtw_layer(k, n, metric_flags.dtw_params(), common.seed + 1);
  } else {
    layer = otw::FeatureLayer::linear_layer(k, n, common.seed + 1);
  }

  auto model = otw::make_mlp(std::move(layer), hidden, train_set.distinct_classes(),
                             common.seed + 2);
  otw::TrainOptions options;
  options.epochs = epochs;
  options.learning_rate = lr;
  options.batch_size = batch;
  options.seed = common.seed;
  options.threads = common.threads;
  const auto history = otw::train(model, train_set, test_set, options);

  std::string csv_text = "epoch,wall_seconds,train_loss,test_error,min_test_error\n";
  for (const auto& epoch : history.epochs) {
    csv_text += std::to_string(epoch.epoch) + "," + format_double(epoch.wall_seconds) + "," +
                format_double(epoch.train_loss) + "," + format_double(epoch.test_error) + "," +
                format_double(epoch.min_test_error) + "\n";
  }
  if (!history_path.empty()) write_text(history_path, csv_text);

  json report;
  report["command"] = "train";
  report["layer"] = layer_kind;
  report["k"] = k;
  report["hidden"] = hidden;
  report["epochs"] = epochs;
  report["train_samples"] = train_set.size();
  report["test_samples"] = test_set.size();
  report["final_train_loss"] = history.epochs.back().train_loss;
  report["final_test_error"] = history.epochs.back().test_error;
  report["min_test_error"] = history.epochs.back().min_test_error;
  if (std::isfinite(history.seconds_to_zero_error)) {
    report["seconds_to_zero_error"] = history.seconds_to_zero_error;
  }
  report["wall_seconds"] = history.epochs.back().wall_seconds;
  emit_report(report, csv_text, common);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-time optimal-transport warping distance toolkit"};
  app.require_subcommand(1);

  MetricFlags metric_flags;
  CommonFlags common;
  bool csv_in = false;

  // dist
  auto* dist = app.add_subcommand("dist", "One distance between two series");
  std::string inline_a, inline_b, dist_input;
  std::size_t row_i = 0, row_j = 1;
  dist->add_option("--a", inline_a, "Inline series, comma separated");
  dist->add_option("--b", inline_b, "Inline series, comma separated");
  dist->add_option("--input", dist_input, "Dataset file; pair picked by --i/--j");
  dist->add_option("--i", row_i, "First row index");
  dist->add_option("--j", row_j, "Second row index");

  // knn
  auto* knn = app.add_subcommand("knn", "1-NN error with validated hyperparameters");
  std::string knn_train, knn_test;
  std::size_t repeats = 10;
  knn->add_option("--train-data", knn_train, "Training set (label-first TSV)")->required();
  knn->add_option("--test-data", knn_test, "Test set")->required();
  knn->add_option("--repeats", repeats, "Validation repeats (default 10)");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Agglomerative clustering Rand index");
  std::string cluster_input;
  std::vector<std::string> cluster_metrics;
  std::size_t k_override = 0, max_samples = 500;
  std::string linkage = "average";
  cluster->add_option("--input", cluster_input, "Dataset file")->required();
  cluster->add_option("--metrics", cluster_metrics,
                      "Metrics to compare (otw dtw l1 l2); default --metric");
  cluster->add_option("--k", k_override, "Cluster count (default: distinct labels)");
  cluster->add_option("--max-samples", max_samples, "Sample cap (default 500)");
  cluster->add_option("--linkage", linkage, "average, single or complete")
      ->check(CLI::IsMember({"average", "single", "complete"}));

  // verify
  auto* verify = app.add_subcommand("verify", "Run the bound/identity property sweeps");

  // bench
  auto* bench = app.add_subcommand("bench", "Scaling benchmark with log-log slopes");
  std::size_t min_n = 64, max_n = 8192, reps = 5, layer_max_n = 2048;
  bool no_layers = false;
  bench->add_option("--min-n", min_n, "Smallest series length");
  bench->add_option("--max-n", max_n, "Largest series length (doubling ladder)");
  bench->add_option("--reps", reps, "Repetitions per measurement (>= 3)");
  bench->add_flag("--no-layers", no_layers, "Skip the feature-layer passes");
  bench->add_option("--layer-max-n", layer_max_n, "Length cap for layer passes");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the 4-class pulse dataset");
  otw::SyntheticSpec spec;
  double synth_noise = 0.0, train_fraction = 0.75;
  std::string out_prefix = "synthetic";
  synth->add_option("--length", spec.length, "Series length");
  synth->add_option("--per-class", spec.samples_per_class, "Samples per class");
  synth->add_option("--pulse-width", spec.pulse_width, "Pulse width");
  synth->add_option("--left", spec.left_offset, "Left pulse offset");
  synth->add_option("--right", spec.right_offset, "Right pulse offset");
  synth->add_option("--noise", synth_noise, "Gaussian noise sigma");
  synth->add_option("--split", train_fraction, "Train fraction (default 0.75)");
  synth->add_option("--prefix", out_prefix, "Output path prefix");

  // train
  auto* train = app.add_subcommand("train", "Train a feature-layer classifier");
  std::string layer_kind = "otw", train_path, test_path, history_path = "history.csv";
  std::size_t k = 1, epochs = 500, batch = 32;
  double lr = 1e-3;
  std::vector<std::size_t> hidden{128, 128};
  train->add_option("--layer", layer_kind, "Feature layer: otw, dtw or linear")
      ->check(CLI::IsMember({"otw", "dtw", "linear"}));
  train->add_option("--k", k, "Feature rows");
  train->add_option("--hidden", hidden, "Hidden layer sizes");
  train->add_option("--epochs", epochs, "Training epochs");
  train->add_option("--lr", lr, "Adam learning rate");
  train->add_option("--batch", batch, "Mini-batch size");
  train->add_option("--train-data", train_path, "Training set file (else synthetic)");
  train->add_option("--test-data", test_path, "Test set file");
  train->add_option("--noise", synth_noise, "Synthetic noise sigma");
  train->add_option("--length", spec.length, "Synthetic series length");
  train->add_option("--per-class", spec.samples_per_class, "Synthetic samples per class");
  train->add_option("--pulse-width", spec.pulse_width, "Synthetic pulse width");
  train->add_option("--left", spec.left_offset, "Synthetic left pulse offset");
  train->add_option("--right", spec.right_offset, "Synthetic right pulse offset");
  train->add_option("--history", history_path, "History CSV path");

  for (auto* cmd : {dist, knn, cluster, verify, bench, synth, train}) {
    common.attach(cmd);
    cmd->add_flag("--csv-in", csv_in, "Input files are comma separated");
  }
  for (auto* cmd : {dist, knn, cluster, train}) metric_flags.attach(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dist->parsed()) {
      return cmd_dist(metric_flags, common, inline_a, inline_b, dist_input, row_i, row_j,
                      csv_in);
    }
    if (knn->parsed()) {
      return cmd_knn(metric_flags, common, knn_train, knn_test, repeats, csv_in);
    }
    if (cluster->parsed()) {
      return cmd_cluster(cluster_metrics, metric_flags, common, cluster_input, k_override,
                         max_samples, linkage, csv_in);
    }
    if (verify->parsed()) return cmd_verify(common);
    if (bench->parsed()) {
      return cmd_bench(common, min_n, max_n, reps, !no_layers, layer_max_n);
    }
    if (synth->parsed()) {
      spec.noise_sigma = synth_noise;
      return cmd_synth(common, spec, train_fraction, out_prefix);
    }
    if (train->parsed()) {
      return cmd_train(metric_flags, common, layer_kind, k, hidden, epochs, lr, batch,
                       train_path, test_path, spec, synth_noise, train_fraction, history_path,
                       csv_in);
    }
  } catch (const otw::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
