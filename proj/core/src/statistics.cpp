#include "cvm/statistics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvm {

double SubsetStatistics::at(SubsetMask a) const {
  for (const auto& [mask, v] : per_subset)
    if (mask == a) return v;
  throw std::invalid_argument("subset " + subset_name(a) +
                              " missing from statistics");
}

bool SubsetStatistics::contains(SubsetMask a) const {
  for (const auto& [mask, v] : per_subset)
    if (mask == a) return true;
  return false;
}

double dn_kernel(int s, int t, std::size_t n) {
  const int ni = static_cast<int>(n);
  if (s < 1 || s > ni || t < 1 || t > ni)
    throw std::invalid_argument("rank out of range 1..n in dn_kernel");
  const double nd = static_cast<double>(n);
  const double n2 = nd * nd;
  return (nd + 1.0) * (2.0 * nd + 1.0) / (6.0 * n2) +
         s * (s - 1.0) / (2.0 * n2) + t * (t - 1.0) / (2.0 * n2) -
         static_cast<double>(std::max(s, t)) / nd;
}

namespace {

/// n x n table of D_n values, shared by every column.
std::vector<double> dn_table(std::size_t n) {
  std::vector<double> tab(n * n);
  for (std::size_t s = 1; s <= n; ++s)
    for (std::size_t t = 1; t <= n; ++t)
      tab[(s - 1) * n + (t - 1)] =
          dn_kernel(static_cast<int>(s), static_cast<int>(t), n);
  return tab;
}

}  // namespace

double cvm_subset(const RankMatrix& r, SubsetMask a) {
  require_valid_subset(a, static_cast<int>(r.d));
  const std::size_t n = r.n;
  const auto tab = dn_table(n);
  const auto js = members(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double prod = 1.0;
      for (int k : js)
        prod *= tab[(r(i, k - 1) - 1) * n + (r(j, k - 1) - 1)];
      sum += prod;
    }
  return sum / static_cast<double>(n);
}

double cvm_global(const RankMatrix& r) {
  const std::size_t n = r.n, d = r.d;
  const double nd = static_cast<double>(n);
  const double n2 = nd * nd;

  double term1 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double prod = 1.0;
      for (std::size_t k = 0; k < d; ++k)
        prod *= 1.0 - static_cast<double>(std::max(r(i, k), r(j, k))) / nd;
      term1 += prod;
    }
  term1 /= nd;

  double term2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double prod = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double rik = r(i, k);
      prod *= (nd * (nd - 1.0) - rik * (rik - 1.0)) / (2.0 * n2);
    }
    term2 += prod;
  }

  const double term3 =
      nd * std::pow((nd - 1.0) * (2.0 * nd - 1.0) / (6.0 * n2),
                    static_cast<double>(d));

  double b = term1 - 2.0 * term2 + term3;
  if (b < 0.0) {
    assert(-b < 1e-10 * nd);
    b = 0.0;
  }
  return b;
}

SubsetStatistics subset_statistics(const RankMatrix& r, bool pairs_only) {
  SubsetStatistics out;
  out.n = r.n;
  out.d = r.d;
  for (SubsetMask a : subsets_of_dimension(static_cast<int>(r.d))) {
    if (pairs_only && cardinality(a) != 2) continue;
    out.per_subset.emplace_back(a, cvm_subset(r, a));
  }
  return out;
}

double alpha_prime(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  const double m = static_cast<double>((1 << d) - d - 1);
  return 1.0 - std::pow(1.0 - alpha, 1.0 / m);
}

double alpha_double_prime(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  return 1.0 - std::pow(1.0 - alpha, 2.0 / (d * (d - 1.0)));
}

double combine_linear(const SubsetStatistics& stats) {
  double sum = 0.0;
  for (const auto& [mask, v] : stats.per_subset) sum += v;
  return sum;
}

double combine_weighted(const SubsetStatistics& stats) {
  double sum = 0.0;
  for (const auto& [mask, v] : stats.per_subset)
    sum += std::pow(std::numbers::pi, 2.0 * cardinality(mask)) * v;
  return sum;
}

DependogramResult combine_dependogram(const SubsetStatistics& stats,
                                      const std::map<int, double>& crit) {
  DependogramResult out;
  for (const auto& [mask, v] : stats.per_subset) {
    auto it = crit.find(cardinality(mask));
    if (it == crit.end())
      throw std::invalid_argument("no critical value supplied for |A|=" +
                                  std::to_string(cardinality(mask)));
    if (!(it->second > 0.0))
      throw std::invalid_argument("critical value must be positive");
    out.rows.push_back({mask, v, it->second});
    out.statistic = std::max(out.statistic, v / it->second);
  }
  return out;
}

double combine_fisher(const SubsetStatistics& stats,
                      const std::function<double(int, double)>& cdf,
                      bool* clamped) {
  constexpr double kFloor = 1e-15;
  if (clamped) *clamped = false;
  double t = 0.0;
  for (const auto& [mask, v] : stats.per_subset) {
    double tail = 1.0 - cdf(cardinality(mask), v);
    if (tail < kFloor) {
      tail = kFloor;
      if (clamped) *clamped = true;
    }
    t += -2.0 * std::log(tail);
  }
  return t;
}

}  // namespace cvm
