#ifndef CVM_STATISTICS_HPP_
#define CVM_STATISTICS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cvm/ranks.hpp"
#include "cvm/subset.hpp"

namespace cvm {

/// Values of the per-subset statistics B_{A,n}, ordered by (|A|, mask).
struct SubsetStatistics {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::pair<SubsetMask, double>> per_subset;

  double at(SubsetMask a) const;
  bool contains(SubsetMask a) const;
};

/// Rank kernel D_n(s,t); the exact integral of the product of two centered
/// rank indicator factors over one coordinate.
double dn_kernel(int s, int t, std::size_t n);

/// B_{A,n} = (1/n) sum_i sum_j prod_{k in A} D_n(R_ik, R_jk).
double cvm_subset(const RankMatrix& r, SubsetMask a);

/// B_n, the Cramer-von Mises functional of the centered global process,
/// from its three-term rank formula. Tiny negative rounding is clamped to 0.
double cvm_global(const RankMatrix& r);

/// All B_{A,n}: every |A| >= 2 subset, or only pairs when pairs_only.
SubsetStatistics subset_statistics(const RankMatrix& r,
                                   bool pairs_only = false);

/// Per-test level alpha' = 1 - (1-alpha)^{1/(2^d - d - 1)}.
double alpha_prime(double alpha, int d);

/// Pairwise per-test level alpha'' = 1 - (1-alpha)^{2/{d(d-1)}}.
double alpha_double_prime(double alpha, int d);

/// L_n = sum of all B_{A,n} (or the pairwise sum when stats holds pairs).
double combine_linear(const SubsetStatistics& stats);

/// W_n = sum of pi^{2|A|} B_{A,n}.
double combine_weighted(const SubsetStatistics& stats);

struct DependogramRow {
  SubsetMask subset;
  double value;      // B_{A,n}
  double critical;   // q_{|A|}(alpha')
};

struct DependogramResult {
  double statistic = 0.0;  // M_n; the test rejects when M_n > 1
  std::vector<DependogramRow> rows;
};

/// M_n = max_A B_{A,n} / q_{|A|}(alpha'); crit maps |A| -> quantile.
DependogramResult combine_dependogram(const SubsetStatistics& stats,
                                      const std::map<int, double>& crit);

/// T_n = -2 sum log{1 - F_{|A|}(B_{A,n})}; cdf maps |A| to the null CDF.
/// 1 - F is floored at 1e-15 so T_n stays finite; clamped is set when the
/// floor was hit.
double combine_fisher(
    const SubsetStatistics& stats,
    const std::function<double(int, double)>& cdf, bool* clamped = nullptr);

/// Degrees of freedom of the chi-square null law of T_n.
inline int fisher_df(int d, bool pairs_only) {
  return pairs_only ? d * (d - 1) : 2 * ((1 << d) - d - 1);
}

}  // namespace cvm

#endif  // CVM_STATISTICS_HPP_
