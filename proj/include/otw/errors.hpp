#pragma once

#include <stdexcept>
#include <string>

namespace otw {

// Invalid data or arguments (bad lengths, negative mass, ragged files...).
// The CLI maps this to exit code 2; CLI11 usage errors map to exit code 1.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace otw
