#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "otw/dataset.hpp"
#include "otw/distance.hpp"

namespace otw {

// Candidate metrics for validation, enumerated in a fixed order so that
// tie-breaking by grid position is deterministic.
struct HyperGrid {
  std::vector<Metric> cells;

  // Default search grid for the warping distance on series of length n:
  // m in {0.1, 1, 10}, s in {1, ceil(n/8), ceil(n/4), ceil(n/2), n}
  // (deduplicated), beta = 0, both sign strategies. Enumerated sign-major,
  // then m, then s.
  static HyperGrid default_otw(std::size_t n);

  // DTW band radii {0, ceil(0.05 n), ceil(0.1 n), ceil(0.2 n), n-1},
  // deduplicated, with the squared local cost.
  static HyperGrid default_dtw(std::size_t n);
};

struct OneNnResult {
  std::vector<int> predictions;
  double error_rate = 0.0;
};

// Labels each test item with the label of its nearest training item under
// the metric; distance ties keep the lowest training index. Test items may
// be evaluated concurrently; results are stored by index.
OneNnResult one_nn_classify(const LabeledDataset& train, const LabeledDataset& test,
                            const Metric& metric, unsigned threads = 1);

struct SelectedParams {
  Metric metric;
  std::size_t grid_index = 0;
  double validation_accuracy = 0.0;
};

// Seeded 80/20 split of the training set; every grid cell is scored by 1-NN
// accuracy on the held-out 20% and the best cell wins, ties broken by grid
// order. Identical seed, identical selection.
SelectedParams select_params(const LabeledDataset& train, const HyperGrid& grid,
                             std::uint64_t seed, unsigned threads = 1);

enum class Linkage { Average, Single, Complete };

// Bottom-up merging on a precomputed distance matrix until k clusters
// remain. Ties merge the pair with the smallest member indices. Returns one
// cluster id per item in [0, k).
std::vector<int> agglomerative_cluster(const DistanceMatrix& distances, std::size_t k,
                                       Linkage linkage = Linkage::Average);

// Fraction of item pairs on which two partitions agree (co-clustered in
// both or separated in both).
double rand_index(const std::vector<int>& truth, const std::vector<int>& predicted);

}  // namespace otw
