#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "otw/series.hpp"

namespace otw {

// Equal-length series with integer class labels. Labels are kept verbatim
// (UCR archives use 1..k, 0..k-1 and -1/1 conventions interchangeably).
struct LabeledDataset {
  std::vector<TimeSeries> series;
  std::vector<int> labels;
  std::string name;

  std::size_t size() const { return series.size(); }
  std::size_t series_length() const { return series.front().size(); }

  // Throws unless series/label counts match, the set is non-empty and all
  // series share one length.
  void validate() const;

  std::size_t distinct_classes() const;
};

}  // namespace otw
