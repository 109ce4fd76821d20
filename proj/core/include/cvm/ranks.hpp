#ifndef CVM_RANKS_HPP_
#define CVM_RANKS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cvm/dataset.hpp"
#include "cvm/subset.hpp"

namespace cvm {

/// Column-wise ranks of a Dataset. Each column is a permutation of 1..n.
struct RankMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<int> ranks;           // row-major, values in 1..n
  std::vector<int> ties_broken;     // per column, number of tied pairs broken

  int operator()(std::size_t i, std::size_t j) const {
    return ranks[i * d + j];
  }
  bool has_ties() const {
    for (int t : ties_broken)
      if (t > 0) return true;
    return false;
  }
};

/// Column-wise ranks R_ij = #{l : X_lj <= X_ij}. Ties are broken uniformly
/// at random with the seeded generator; ties_broken counts them per column.
RankMatrix compute_ranks(const Dataset& data, std::uint64_t seed = 0);

/// Empirical copula C_n(u) = (1/n) sum_i prod_j 1(R_ij <= n u_j).
/// u must lie in [0,1]^d.
double empirical_copula(const RankMatrix& r, std::span<const double> u);

/// Empirical copula at the grid point u_j = idx[j]/n, evaluated with exact
/// integer comparisons (idx entries in 0..n).
double empirical_copula_grid(const RankMatrix& r, std::span<const int> idx);

/// Mobius subset process
///   G_{A,n}(u) = n^{-1/2} sum_i prod_{j in A} {1(R_ij <= n u_j) - u_j}.
double mobius_process(const RankMatrix& r, SubsetMask a,
                      std::span<const double> u);

/// Same, at the grid point u_j = idx[j]/n with exact integer indicators.
double mobius_process_grid(const RankMatrix& r, SubsetMask a,
                           std::span<const int> idx);

/// Centered variant used by the Cramer-von Mises statistics: indicator
/// factors are centered at the discrete uniform CDF U_n(u) = floor(n u)/n
/// instead of u. B_{A,n} is the exact integral of its square.
double mobius_process_centered(const RankMatrix& r, SubsetMask a,
                               std::span<const double> u);

/// Centered global process  sqrt(n) { C_n(u) - prod_j U_n(u_j) }.
double centered_copula_process(const RankMatrix& r, std::span<const double> u);

}  // namespace cvm

#endif  // CVM_RANKS_HPP_
