#pragma once

#include <stdexcept>
#include <string>

namespace embtext {

// Invalid or inconsistent input data (bad files, empty vocabularies,
// unknown labels, dimension mismatches). CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure during optimization (non-finite loss or weights).
// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace embtext
