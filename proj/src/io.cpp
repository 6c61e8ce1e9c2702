#include "otw/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "otw/errors.hpp"

namespace otw {

namespace {

std::vector<std::string> split_fields(const std::string& line, char separator) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == separator) {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_number(const std::string& field, std::size_t row, std::size_t col) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &consumed);
  } catch (const std::exception&) {
    throw DataError("non-numeric field at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1) + ": '" + field + "'");
  }
  if (consumed != field.size()) {
    throw DataError("non-numeric field at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1) + ": '" + field + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError("non-finite value at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1));
  }
  return value;
}

}  // namespace

LabeledDataset read_ucr_tsv(const std::string& path, char separator) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");

  LabeledDataset data;
  data.name = std::filesystem::path(path).stem().string();

  std::string line;
  std::size_t row = 0;
  std::size_t expected_fields = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++row;
      continue;  // tolerate blank lines (trailing newline etc.)
    }
    const auto fields = split_fields(line, separator);
    if (fields.size() < 2) {
      throw DataError("row " + std::to_string(row + 1) + " in '" + path +
                      "' has fewer than 2 fields");
    }
    if (expected_fields == 0) {
      expected_fields = fields.size();
    } else if (fields.size() != expected_fields) {
      throw DataError("ragged row " + std::to_string(row + 1) + " in '" + path + "': " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(expected_fields));
    }
    const double raw_label = parse_number(fields[0], row, 0);
    if (std::fabs(raw_label - std::round(raw_label)) > 1e-9) {
      throw DataError("label at row " + std::to_string(row + 1) +
                      " is not integer-valued: '" + fields[0] + "'");
    }
    std::vector<double> values(fields.size() - 1);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      values[c - 1] = parse_number(fields[c], row, c);
    }
    data.series.emplace_back(std::move(values));
    data.labels.push_back(static_cast<int>(std::llround(raw_label)));
    ++row;
  }
  if (data.series.empty()) {
    throw DataError("'" + path + "' contains no data rows");
  }
  data.validate();
  return data;
}

void write_ucr_tsv(const LabeledDataset& data, const std::string& path, char separator) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  char buf[40];
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.labels[i];
    for (std::size_t j = 0; j < data.series[i].size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.series[i][j]);
      out << separator << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("failed while writing '" + path + "'");
}

}  // namespace otw
