#ifndef CVM_CRITICAL_VALUES_HPP_
#define CVM_CRITICAL_VALUES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cvm/copula.hpp"
#include "cvm/spectral.hpp"

namespace cvm {

enum class StatisticId { kB, kL, kW, kM, kT, kL2, kM2, kT2 };

StatisticId statistic_from_string(const std::string& name);
std::string statistic_name(StatisticId id);
bool is_pairwise(StatisticId id);

struct CriticalValueSettings {
  std::string method = "spectral-mc";  // spectral-mc | inversion | finite-sample-mc
  std::size_t reps = 1000000;          // Monte Carlo replications
  std::size_t dm_grid = 128;           // grid size m of the covariance sampler
  std::size_t sample_n = 100;          // sample size for finite-sample-mc
  int truncation = 0;                  // per-index cutoff; 0 = defaults
  std::uint64_t seed = 20070513;
  std::string cache_path;              // empty disables the cache
};

struct CriticalValue {
  double value = 0.0;
  double std_error = 0.0;  // 0 for deterministic methods
};

/// Null spectrum of a single subset statistic Q_A with |A| = card.
WeightedChiSquareSum subset_null_spectrum(int card, int truncation = 0);

/// Merged null spectrum of L (scale 1) or W (scale pi^{2|A|}) at dimension d,
/// optionally restricted to pairs.
WeightedChiSquareSum combination_null_spectrum(bool weighted, int d,
                                               bool pairs_only,
                                               int truncation = 0);

/// q_{|A|}(p): the p-quantile of Q_A by CDF inversion and bisection.
double subset_quantile(int card, double p, int truncation = 0);

/// Per-cardinality quantiles q_{|A|}(alpha') (alpha'' in pairwise mode) used
/// by the dependogram.
std::map<int, double> dependogram_quantiles(int d, double alpha,
                                            bool pairs_only,
                                            int truncation = 0);

/// Finite-sample analogue of dependogram_quantiles: per-cardinality
/// (1 - alpha')-quantiles of B_{A,n} under simulated independence at sample
/// size n.
std::map<int, double> finite_sample_dependogram_quantiles(
    int d, double alpha, bool pairs_only, std::size_t n, std::size_t reps,
    std::uint64_t seed);

/// One replication of the grid approximation to the global limit B,
/// decomposed so a single draw serves a whole delta grid:
/// B(delta) = (a + delta b + delta^2 e) / m.
struct DmDraw {
  double a, b, e;
};
double dm_value(const DmDraw& d, double delta, std::size_t m);

/// Covariance-based draws of the global limit: per replication sample m
/// uniform points, factor the covariance of the independence copula process,
/// and record the quadratic decomposition above. The drift direction comes
/// from the family's score at independence.
std::vector<DmDraw> dm_draws(std::size_t m, Family family, int d,
                             std::uint64_t seed, std::size_t reps);

/// Convenience: realized draws of B at a fixed delta.
std::vector<double> dm_sample_B(std::size_t m, double delta, Family family,
                                int d, std::uint64_t seed, std::size_t reps);

/// Empirical p-quantile with a standard error from the order-statistic
/// density estimate. Sorts a copy.
CriticalValue empirical_quantile(std::vector<double> draws, double p);

/// Critical value of a combination statistic at level alpha. For M/M2 the
/// rejection threshold is 1 by construction (the per-subset quantiles live in
/// dependogram_quantiles); T/T2 use the chi-square rule under the inversion
/// and spectral-mc methods and simulated rank statistics under
/// finite-sample-mc.
CriticalValue critical_value(StatisticId id, int d, double alpha,
                             const CriticalValueSettings& settings = {});

}  // namespace cvm

#endif  // CVM_CRITICAL_VALUES_HPP_
