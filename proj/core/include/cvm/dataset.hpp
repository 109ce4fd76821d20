#ifndef CVM_DATASET_HPP_
#define CVM_DATASET_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace cvm {

/// An n x d matrix of observations, rows are cases and columns are
/// variables. Entries are finite after ingestion; n >= 2 and d >= 2.
struct Dataset {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;  // row-major, n*d entries
  std::vector<std::string> names;  // empty or d column names

  double operator()(std::size_t i, std::size_t j) const {
    return values[i * d + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values[i * d + j];
  }
};

/// Builds a Dataset from in-memory values and validates the invariants.
Dataset make_dataset(std::size_t n, std::size_t d, std::vector<double> values,
                     std::vector<std::string> names = {});

/// Reads a delimited text file (comma or whitespace separated, optional
/// header row). Throws std::runtime_error naming the offending line on
/// ragged rows or non-numeric cells.
Dataset load_dataset(const std::string& path);

/// Writes a Dataset as comma-separated text with a header row.
void write_dataset(const Dataset& data, const std::string& path);

}  // namespace cvm

#endif  // CVM_DATASET_HPP_
