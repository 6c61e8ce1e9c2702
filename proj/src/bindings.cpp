#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "otw/dataset.hpp"
#include "otw/distance.hpp"
#include "otw/dtw.hpp"
#include "otw/errors.hpp"
#include "otw/eval.hpp"
#include "otw/net.hpp"
#include "otw/ot_oracle.hpp"
#include "otw/series.hpp"
#include "otw/verify.hpp"

namespace py = pybind11;

namespace {

otw::OtwParams otw_params(double m, std::size_t s, double beta, const std::string& sign) {
  otw::OtwParams p;
  p.m = m;
  p.s = s;
  p.beta = beta;
  if (sign == "split") {
    p.sign_strategy = otw::SignStrategy::Split;
  } else if (sign == "direct") {
    p.sign_strategy = otw::SignStrategy::Direct;
  } else {
    throw otw::DataError("sign must be 'direct' or 'split'");
  }
  return p;
}

otw::DtwParams dtw_params(std::optional<std::size_t> window, const std::string& cost) {
  otw::DtwParams p;
  p.window = window;
  if (cost == "abs") {
    p.local_cost = otw::LocalCost::AbsDiff;
  } else if (cost == "sq") {
    p.local_cost = otw::LocalCost::SquaredDiff;
  } else {
    throw otw::DataError("cost must be 'sq' or 'abs'");
  }
  return p;
}

otw::Metric make_metric(const std::string& name, double m, std::size_t s, double beta,
                        const std::string& sign, std::optional<std::size_t> window,
                        const std::string& cost) {
  if (name == "otw") return otw::Metric::otw_metric(otw_params(m, s, beta, sign));
  if (name == "dtw") return otw::Metric::dtw_metric(dtw_params(window, cost));
  if (name == "l1") return otw::Metric::l1();
  if (name == "l2") return otw::Metric::l2();
  throw otw::DataError("metric must be one of otw, dtw, l1, l2");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear-time optimal-transport warping distances for time series";

  py::register_exception<otw::DataError>(m, "DataError", PyExc_ValueError);

  m.def(
      "prefix_sums",
      [](const std::vector<double>& a) { return otw::prefix_sums(otw::TimeSeries(a)).values; },
      py::arg("a"), "Full cumulative sums of a series");
  m.def(
      "windowed_prefix_sums",
      [](const std::vector<double>& a, std::size_t s) {
        return otw::windowed_prefix_sums(otw::TimeSeries(a), s).values;
      },
      py::arg("a"), py::arg("s"), "Trailing-window cumulative sums");
  m.def(
      "split_signs",
      [](const std::vector<double>& a) {
        const auto [pos, neg] = otw::split_signs(otw::TimeSeries(a));
        return std::make_pair(pos.values(), neg.values());
      },
      py::arg("a"), "Positive and negative parts");
  m.def(
      "z_normalize",
      [](const std::vector<double>& a) {
        return otw::z_normalize(otw::TimeSeries(a)).values();
      },
      py::arg("a"), "Mean 0, population std 1 (constant series map to zeros)");

  m.def("smooth_l1", &otw::smooth_l1, py::arg("x"), py::arg("beta"));
  m.def("smooth_l1_deriv", &otw::smooth_l1_deriv, py::arg("x"), py::arg("beta"));

  m.def(
      "otw",
      [](const std::vector<double>& a, const std::vector<double>& b, double m_, std::size_t s,
         double beta, const std::string& sign) {
        return otw::otw(otw::TimeSeries(a), otw::TimeSeries(b), otw_params(m_, s, beta, sign));
      },
      py::arg("a"), py::arg("b"), py::arg("m") = 1.0, py::arg("s") = 0,
      py::arg("beta") = 0.0, py::arg("sign") = "direct",
      "Optimal-transport warping distance (s = 0 means the full window)");
  m.def(
      "otw_grad",
      [](const std::vector<double>& a, const std::vector<double>& b, double m_, std::size_t s,
         double beta, const std::string& sign) {
        return otw::otw_grad(otw::TimeSeries(a), otw::TimeSeries(b),
                             otw_params(m_, s, beta, sign));
      },
      py::arg("a"), py::arg("b"), py::arg("m") = 1.0, py::arg("s") = 0,
      py::arg("beta") = 0.1, py::arg("sign") = "direct",
      "Analytic gradients of otw with respect to both inputs");

  m.def(
      "dtw",
      [](const std::vector<double>& a, const std::vector<double>& b,
         std::optional<std::size_t> window, const std::string& cost) {
        return otw::dtw(otw::TimeSeries(a), otw::TimeSeries(b), dtw_params(window, cost));
      },
      py::arg("a"), py::arg("b"), py::arg("window") = py::none(), py::arg("cost") = "sq",
      "Banded dynamic time warping (window = None means unconstrained)");
  m.def(
      "dtw_brute_force",
      [](const std::vector<double>& a, const std::vector<double>& b,
         std::optional<std::size_t> window, const std::string& cost) {
        return otw::dtw_brute_force(otw::TimeSeries(a), otw::TimeSeries(b),
                                    dtw_params(window, cost));
      },
      py::arg("a"), py::arg("b"), py::arg("window") = py::none(), py::arg("cost") = "sq",
      "Path-enumeration oracle for dtw, n <= 8");
  m.def(
      "minkowski",
      [](const std::vector<double>& a, const std::vector<double>& b, int order) {
        return otw::minkowski(otw::TimeSeries(a), otw::TimeSeries(b), order);
      },
      py::arg("a"), py::arg("b"), py::arg("order") = 2);

  m.def("wasserstein_1d", &otw::wasserstein_1d_closed_form, py::arg("a"), py::arg("b"),
        "Balanced 1-d optimal transport via cumulative sums");
  m.def("extend_with_sink", &otw::extend_with_sink, py::arg("a"), py::arg("b"));
  m.def(
      "sink_cost_matrix",
      [](std::size_t n, double m_) { return otw::build_sink_cost_matrix(n, m_).entries; },
      py::arg("n"), py::arg("m"));
  m.def("unbalanced_ot", &otw::unbalanced_ot, py::arg("a"), py::arg("b"), py::arg("m"),
        py::arg("length_cap") = otw::kOracleLengthCap,
        "Exact unbalanced optimal transport through the sink-extended LP");
  m.def(
      "solve_transport_lp",
      [](const std::vector<double>& supplies, const std::vector<double>& demands,
         const std::vector<std::vector<double>>& costs) {
        const auto plan = otw::solve_transport_lp(supplies, demands, costs);
        std::vector<std::vector<double>> rows(plan.rows, std::vector<double>(plan.cols));
        for (std::size_t i = 0; i < plan.rows; ++i) {
          for (std::size_t j = 0; j < plan.cols; ++j) rows[i][j] = plan.at(i, j);
        }
        return std::make_pair(rows, plan.objective);
      },
      py::arg("supplies"), py::arg("demands"), py::arg("costs"),
      "Exact transportation solver; returns (plan, objective)");
  m.def(
      "check_upper_bound",
      [](const std::vector<double>& a, const std::vector<double>& b, double m_) {
        const auto check = otw::check_upper_bound(a, b, m_);
        return std::make_tuple(check.lhs, check.rhs, check.holds);
      },
      py::arg("a"), py::arg("b"), py::arg("m"),
      "Exact unbalanced OT against the linear-time upper bound");
  m.def(
      "check_shift_sensitivity",
      [](const std::vector<double>& a, const std::vector<double>& b, std::size_t t,
         double m_) {
        const auto check = otw::check_shift_sensitivity(a, b, t, m_);
        return std::make_tuple(check.delta, check.bound, check.holds);
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("m"));

  m.def(
      "pairwise_matrix",
      [](const std::vector<std::vector<double>>& rows, const std::string& metric, double m_,
         std::size_t s, double beta, const std::string& sign,
         std::optional<std::size_t> window, const std::string& cost, unsigned threads) {
        std::vector<otw::TimeSeries> series;
        series.reserve(rows.size());
        for (const auto& row : rows) series.emplace_back(row);
        const auto matrix = otw::pairwise_matrix(
            series, make_metric(metric, m_, s, beta, sign, window, cost), threads);
        std::vector<std::vector<double>> out(matrix.dim(), std::vector<double>(matrix.dim()));
        for (std::size_t i = 0; i < matrix.dim(); ++i) {
          for (std::size_t j = 0; j < matrix.dim(); ++j) out[i][j] = matrix.at(i, j);
        }
        return out;
      },
      py::arg("series"), py::arg("metric") = "otw", py::arg("m") = 1.0, py::arg("s") = 0,
      py::arg("beta") = 0.0, py::arg("sign") = "direct", py::arg("window") = py::none(),
      py::arg("cost") = "sq", py::arg("threads") = 1);

  m.def(
      "one_nn",
      [](const std::vector<std::vector<double>>& train_rows, const std::vector<int>& train_labels,
         const std::vector<std::vector<double>>& test_rows, const std::vector<int>& test_labels,
         const std::string& metric, double m_, std::size_t s, double beta,
         const std::string& sign, std::optional<std::size_t> window, const std::string& cost) {
        otw::LabeledDataset train, test;
        for (const auto& row : train_rows) train.series.emplace_back(row);
        train.labels = train_labels;
        train.name = "train";
        for (const auto& row : test_rows) test.series.emplace_back(row);
        test.labels = test_labels;
        test.name = "test";
        const auto result = otw::one_nn_classify(
            train, test, make_metric(metric, m_, s, beta, sign, window, cost));
        return std::make_pair(result.predictions, result.error_rate);
      },
      py::arg("train_series"), py::arg("train_labels"), py::arg("test_series"),
      py::arg("test_labels"), py::arg("metric") = "otw", py::arg("m") = 1.0, py::arg("s") = 0,
      py::arg("beta") = 0.0, py::arg("sign") = "direct", py::arg("window") = py::none(),
      py::arg("cost") = "sq");

  m.def(
      "agglomerative_cluster",
      [](const std::vector<std::vector<double>>& matrix, std::size_t k,
         const std::string& linkage) {
        otw::DistanceMatrix d(matrix.size(), "precomputed");
        for (std::size_t i = 0; i < matrix.size(); ++i) {
          if (matrix[i].size() != matrix.size()) {
            throw otw::DataError("distance matrix must be square");
          }
          for (std::size_t j = i + 1; j < matrix.size(); ++j) d.set(i, j, matrix[i][j]);
        }
        otw::Linkage link = otw::Linkage::Average;
        if (linkage == "single") link = otw::Linkage::Single;
        if (linkage == "complete") link = otw::Linkage::Complete;
        return otw::agglomerative_cluster(d, k, link);
      },
      py::arg("matrix"), py::arg("k"), py::arg("linkage") = "average");
  m.def("rand_index", &otw::rand_index, py::arg("truth"), py::arg("predicted"));

  m.def(
      "make_synthetic",
      [](std::size_t length, std::size_t per_class, std::size_t pulse_width,
         std::size_t left_offset, std::size_t right_offset, double noise_sigma,
         std::uint64_t seed) {
        otw::SyntheticSpec spec;
        spec.length = length;
        spec.samples_per_class = per_class;
        spec.pulse_width = pulse_width;
        spec.left_offset = left_offset;
        spec.right_offset = right_offset;
        spec.noise_sigma = noise_sigma;
        spec.seed = seed;
        const auto data = otw::make_synthetic(spec);
        std::vector<std::vector<double>> rows;
        rows.reserve(data.size());
        for (const auto& series : data.series) rows.push_back(series.values());
        return std::make_pair(rows, data.labels);
      },
      py::arg("length") = 128, py::arg("per_class") = 100, py::arg("pulse_width") = 16,
      py::arg("left_offset") = 16, py::arg("right_offset") = 96,
      py::arg("noise_sigma") = 0.0, py::arg("seed") = 0,
      "Four pulse classes: {square, triangle} x {left, right}");

  m.def(
      "upper_bound_sweep",
      [](std::size_t count, std::uint64_t seed) {
        const auto result = otw::upper_bound_sweep(count, seed);
        return std::make_tuple(result.passes, result.instances, result.max_violation);
      },
      py::arg("count") = 1000, py::arg("seed") = 0,
      "Returns (passes, instances, max_violation)");
}
