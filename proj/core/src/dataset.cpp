#include "cvm/dataset.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cvm {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) {
        cells.push_back(cur);
        cur.clear();
      } else if (c == ',') {
        cells.emplace_back();  // empty comma cell, rejected later
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) cells.push_back(cur);
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

Dataset make_dataset(std::size_t n, std::size_t d, std::vector<double> values,
                     std::vector<std::string> names) {
  if (n < 2 || d < 2)
    throw std::invalid_argument("dataset must have n >= 2 rows and d >= 2 "
                                "columns, got n=" + std::to_string(n) +
                                " d=" + std::to_string(d));
  if (values.size() != n * d)
    throw std::invalid_argument("dataset value buffer has wrong size");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("dataset contains a non-finite entry");
  Dataset out;
  out.n = n;
  out.d = d;
  out.values = std::move(values);
  out.names = std::move(names);
  return out;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open dataset file: " + path);

  std::vector<double> values;
  std::vector<std::string> names;
  std::size_t d = 0, n = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    auto cells = split_cells(line);
    if (cells.empty() || (!cells.empty() && cells[0].size() &&
                          cells[0][0] == '#'))
      continue;

    if (first_content_line) {
      first_content_line = false;
      double tmp;
      bool numeric = true;
      for (const auto& c : cells)
        if (!parse_number(c, tmp)) numeric = false;
      if (!numeric) {
        names = cells;
        d = cells.size();
        continue;
      }
      d = cells.size();
    }

    if (cells.size() != d)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": row has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(d));
    for (const auto& c : cells) {
      double v;
      if (!parse_number(c, v))
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": non-numeric cell '" + c + "'");
      values.push_back(v);
    }
    ++n;
  }

  if (n < 2 || d < 2)
    throw std::runtime_error("dataset " + path + " must have at least 2 rows "
                             "and 2 columns, got n=" + std::to_string(n) +
                             " d=" + std::to_string(d));
  return make_dataset(n, d, std::move(values), std::move(names));
}

void write_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write dataset file: " + path);
  out.precision(17);
  for (std::size_t j = 0; j < data.d; ++j) {
    if (j) out << ',';
    out << (j < data.names.size() ? data.names[j] : "v" + std::to_string(j + 1));
  }
  out << '\n';
  for (std::size_t i = 0; i < data.n; ++i) {
    for (std::size_t j = 0; j < data.d; ++j) {
      if (j) out << ',';
      out << data(i, j);
    }
    out << '\n';
  }
}

}  // namespace cvm
