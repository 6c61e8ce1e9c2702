#include <doctest.h>

#include <vector>

#include "otw/errors.hpp"
#include "otw/eval.hpp"
#include "otw/rng.hpp"
#include "test_util.hpp"

using otw::DistanceMatrix;
using otw::HyperGrid;
using otw::LabeledDataset;
using otw::Metric;
using otw::Rng;
using otw::TimeSeries;

namespace {

LabeledDataset make_dataset(std::vector<std::vector<double>> rows, std::vector<int> labels,
                            const std::string& name = "test") {
  LabeledDataset data;
  for (auto& row : rows) data.series.emplace_back(std::move(row));
  data.labels = std::move(labels);
  data.name = name;
  return data;
}

}  // namespace

TEST_CASE("one_nn_classify examples") {
  const auto train = make_dataset({{0, 0}, {1, 1}}, {1, 2});

  // A test point identical to a training point gets that point's label.
  const auto self = otw::one_nn_classify(train, train, Metric::l1());
  CHECK(self.predictions == std::vector<int>{1, 2});
  CHECK(self.error_rate == 0.0);

  const auto close = otw::one_nn_classify(
      train, make_dataset({{0.9, 1.1}}, {2}), Metric::l1());
  CHECK(close.predictions == std::vector<int>{2});
  CHECK(close.error_rate == 0.0);

  // Single training item: every prediction is its label.
  const auto lone = make_dataset({{0, 0}}, {7});
  const auto single = otw::one_nn_classify(
      lone, make_dataset({{5, 5}, {0, 1}}, {7, 8}), Metric::l1());
  CHECK(single.predictions == std::vector<int>{7, 7});
  CHECK(single.error_rate == doctest::Approx(0.5));

  CHECK_THROWS_AS(otw::one_nn_classify(LabeledDataset{}, train, Metric::l1()), otw::DataError);
  CHECK_THROWS_AS(
      otw::one_nn_classify(train, make_dataset({{1, 2, 3}}, {1}), Metric::l1()),
      otw::DataError);
}

TEST_CASE("one_nn distance ties keep the lowest training index") {
  const auto train = make_dataset({{0, 0}, {2, 0}}, {5, 6});
  const auto result = otw::one_nn_classify(train, make_dataset({{1, 0}}, {6}), Metric::l1());
  CHECK(result.predictions == std::vector<int>{5});
}

TEST_CASE("one_nn on train-as-test has zero error when items are distinct") {
  Rng rng(60);
  LabeledDataset train;
  for (int i = 0; i < 25; ++i) {
    std::vector<double> row(12);
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
    train.series.emplace_back(std::move(row));
    train.labels.push_back(i % 4);
  }
  for (const auto& metric : {Metric::l1(), Metric::l2(), Metric::otw_metric({})}) {
    CHECK(otw::one_nn_classify(train, train, metric).error_rate == 0.0);
  }
}

TEST_CASE("one_nn is identical for any thread count") {
  Rng rng(61);
  LabeledDataset train, test;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> row(16);
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
    train.series.emplace_back(std::move(row));
    train.labels.push_back(i % 3);
  }
  for (int i = 0; i < 20; ++i) {
    std::vector<double> row(16);
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
    test.series.emplace_back(std::move(row));
    test.labels.push_back(i % 3);
  }
  const auto one = otw::one_nn_classify(train, test, Metric::l2(), 1);
  const auto four = otw::one_nn_classify(train, test, Metric::l2(), 4);
  CHECK(one.predictions == four.predictions);
}

TEST_CASE("default grids enumerate deterministically") {
  const auto grid = HyperGrid::default_otw(64);
  CHECK(grid.cells.size() == 30);  // 2 signs x 3 waste costs x 5 windows
  CHECK(grid.cells.front().tag() == "otw(m=0.1,s=1,beta=0,sign=direct)");

  const auto dtw_grid = HyperGrid::default_dtw(64);
  CHECK(dtw_grid.cells.size() == 5);

  // Tiny series collapse duplicate windows.
  CHECK(HyperGrid::default_otw(1).cells.size() == 6);
}

TEST_CASE("select_params picks a perfect cell on a separable toy set") {
  // Two classes far apart in l1; every sensible cell validates at 1.0 and
  // the tie goes to the first grid cell.
  LabeledDataset train;
  Rng rng(62);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> row(8);
    const double base = i % 2 == 0 ? 0.0 : 10.0;
    for (double& v : row) v = base + rng.uniform(-0.1, 0.1);
    train.series.emplace_back(std::move(row));
    train.labels.push_back(i % 2);
  }
  const auto grid = HyperGrid::default_otw(8);
  const auto best = otw::select_params(train, grid, 3);
  CHECK(best.validation_accuracy == 1.0);

  const auto repeat = otw::select_params(train, grid, 3);
  CHECK(repeat.grid_index == best.grid_index);
  CHECK(repeat.validation_accuracy == best.validation_accuracy);

  HyperGrid lone;
  lone.cells.push_back(Metric::l2());
  CHECK(otw::select_params(train, lone, 9).metric.tag() == "l2");

  LabeledDataset tiny = make_dataset({{1, 2}, {2, 1}}, {0, 1});
  CHECK_THROWS_AS(otw::select_params(tiny, grid, 0), otw::DataError);
}

TEST_CASE("agglomerative_cluster edge cases and group recovery") {
  DistanceMatrix d(4, "toy");
  // Two tight groups {0,1} and {2,3}, far apart.
  d.set(0, 1, 1.0);
  d.set(2, 3, 1.0);
  for (std::size_t i : {0, 1}) {
    for (std::size_t j : {2, 3}) d.set(i, j, 10.0);
  }

  CHECK(otw::agglomerative_cluster(d, 4) == std::vector<int>{0, 1, 2, 3});
  CHECK(otw::agglomerative_cluster(d, 1) == std::vector<int>{0, 0, 0, 0});
  CHECK(otw::agglomerative_cluster(d, 2) == std::vector<int>{0, 0, 1, 1});
  for (otw::Linkage linkage :
       {otw::Linkage::Average, otw::Linkage::Single, otw::Linkage::Complete}) {
    CHECK(otw::agglomerative_cluster(d, 2, linkage) == std::vector<int>{0, 0, 1, 1});
  }
  CHECK_THROWS_AS(otw::agglomerative_cluster(d, 0), otw::DataError);
  CHECK_THROWS_AS(otw::agglomerative_cluster(d, 5), otw::DataError);
}

TEST_CASE("average linkage labels are invariant to positive scaling") {
  Rng rng(63);
  const std::size_t n = 14;
  DistanceMatrix d(n, "random");
  DistanceMatrix scaled(n, "random-scaled");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rng.uniform(0.1, 5.0);
      d.set(i, j, v);
      scaled.set(i, j, 3.5 * v);
    }
  }
  for (std::size_t k : {2, 3, 5}) {
    CHECK(otw::agglomerative_cluster(d, k) == otw::agglomerative_cluster(scaled, k));
  }
}

TEST_CASE("rand_index examples and properties") {
  CHECK(otw::rand_index({0, 1, 2}, {0, 1, 2}) == 1.0);
  CHECK(otw::rand_index({0, 0, 1}, {0, 1, 1}) == doctest::Approx(1.0 / 3.0));
  CHECK(otw::rand_index({0, 0, 0}, {0, 1, 2}) == 0.0);
  CHECK_THROWS_AS(otw::rand_index({0, 1}, {0}), otw::DataError);
  CHECK_THROWS_AS(otw::rand_index({0}, {0}), otw::DataError);

  // Symmetric and invariant to label renaming.
  Rng rng(64);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> x(10), y(10), renamed(10);
    for (auto& v : x) v = static_cast<int>(rng.uniform_int(0, 3));
    for (auto& v : y) v = static_cast<int>(rng.uniform_int(0, 3));
    for (std::size_t i = 0; i < y.size(); ++i) renamed[i] = 7 - y[i];
    CHECK(otw::rand_index(x, y) == otw::rand_index(y, x));
    CHECK(otw::rand_index(x, y) == otw::rand_index(x, renamed));
  }
}
