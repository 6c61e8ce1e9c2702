#pragma once

#include <string>

#include "otw/dataset.hpp"

namespace otw {

// Reads a label-first delimited file, one series per row: the first field
// is the integer class label, the rest are the series values. Rows must all
// have the same field count; non-numeric or non-finite fields are rejected
// with row/column coordinates. Labels are preserved verbatim.
LabeledDataset read_ucr_tsv(const std::string& path, char separator = '\t');

// Inverse of read_ucr_tsv; values are written with enough digits to round
// trip exactly.
void write_ucr_tsv(const LabeledDataset& data, const std::string& path,
                   char separator = '\t');

}  // namespace otw
