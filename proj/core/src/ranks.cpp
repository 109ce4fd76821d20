#include "cvm/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cvm {

namespace {

void require_unit_cube(std::span<const double> u, std::size_t d) {
  if (u.size() != d)
    throw std::invalid_argument("evaluation point has wrong dimension");
  for (double v : u)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("evaluation point outside [0,1]^d");
}

}  // namespace

std::vector<SubsetMask> subsets_of_dimension(int d, int min_card) {
  if (d < 2 || d > 20)
    throw std::invalid_argument("dimension must be in [2,20]");
  std::vector<SubsetMask> out;
  for (SubsetMask a = 0; a <= full_set(d); ++a)
    if (cardinality(a) >= min_card) out.push_back(a);
  std::stable_sort(out.begin(), out.end(),
                   [](SubsetMask x, SubsetMask y) {
                     return std::pair(cardinality(x), x) <
                            std::pair(cardinality(y), y);
                   });
  return out;
}

std::vector<SubsetMask> sub_subsets(SubsetMask a) {
  std::vector<SubsetMask> out;
  SubsetMask b = 0;
  while (true) {
    out.push_back(b);
    if (b == a) break;
    b = (b - a) & a;  // next subset of a
  }
  return out;
}

RankMatrix compute_ranks(const Dataset& data, std::uint64_t seed) {
  const std::size_t n = data.n, d = data.d;
  RankMatrix out;
  out.n = n;
  out.d = d;
  out.ranks.assign(n * d, 0);
  out.ties_broken.assign(d, 0);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(order.begin(), order.end(), 0);
    // Random tie-break: shuffle first, then stable sort on the value.
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return data(a, j) < data(b, j);
                     });
    int ties = 0;
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (data(order[k], j) == data(order[k + 1], j)) ++ties;
    out.ties_broken[j] = ties;
    for (std::size_t k = 0; k < n; ++k)
      out.ranks[order[k] * d + j] = static_cast<int>(k + 1);
  }
  return out;
}

double empirical_copula(const RankMatrix& r, std::span<const double> u) {
  require_unit_cube(u, r.d);
  const double n = static_cast<double>(r.n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < r.d; ++j)
      if (static_cast<double>(r(i, j)) > n * u[j]) {
        all = false;
        break;
      }
    if (all) ++count;
  }
  return static_cast<double>(count) / n;
}

double empirical_copula_grid(const RankMatrix& r, std::span<const int> idx) {
  if (idx.size() != r.d)
    throw std::invalid_argument("grid index has wrong dimension");
  for (int k : idx)
    if (k < 0 || k > static_cast<int>(r.n))
      throw std::invalid_argument("grid index outside 0..n");
  std::size_t count = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < r.d; ++j)
      if (r(i, j) > idx[j]) {
        all = false;
        break;
      }
    if (all) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(r.n);
}

double mobius_process(const RankMatrix& r, SubsetMask a,
                      std::span<const double> u) {
  require_valid_subset(a, static_cast<int>(r.d));
  require_unit_cube(u, r.d);
  const double n = static_cast<double>(r.n);
  const auto js = members(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    double prod = 1.0;
    for (int j : js) {
      const double ind =
          static_cast<double>(r(i, j - 1)) <= n * u[j - 1] ? 1.0 : 0.0;
      prod *= ind - u[j - 1];
    }
    sum += prod;
  }
  return sum / std::sqrt(n);
}

double mobius_process_grid(const RankMatrix& r, SubsetMask a,
                           std::span<const int> idx) {
  require_valid_subset(a, static_cast<int>(r.d));
  const double n = static_cast<double>(r.n);
  const auto js = members(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    double prod = 1.0;
    for (int j : js) {
      const double ind = r(i, j - 1) <= idx[j - 1] ? 1.0 : 0.0;
      prod *= ind - static_cast<double>(idx[j - 1]) / n;
    }
    sum += prod;
  }
  return sum / std::sqrt(n);
}

double mobius_process_centered(const RankMatrix& r, SubsetMask a,
                               std::span<const double> u) {
  require_valid_subset(a, static_cast<int>(r.d));
  require_unit_cube(u, r.d);
  const double n = static_cast<double>(r.n);
  const auto js = members(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    double prod = 1.0;
    for (int j : js) {
      const double nu = n * u[j - 1];
      const double ind = static_cast<double>(r(i, j - 1)) <= nu ? 1.0 : 0.0;
      const double un = std::min(std::floor(nu), n) / n;
      prod *= ind - un;
    }
    sum += prod;
  }
  return sum / std::sqrt(n);
}

double centered_copula_process(const RankMatrix& r,
                               std::span<const double> u) {
  require_unit_cube(u, r.d);
  const double n = static_cast<double>(r.n);
  double prod = 1.0;
  for (std::size_t j = 0; j < r.d; ++j)
    prod *= std::min(std::floor(n * u[j]), n) / n;
  return std::sqrt(n) * (empirical_copula(r, u) - prod);
}

}  // namespace cvm
