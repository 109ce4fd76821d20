#ifndef CVM_POWER_HPP_
#define CVM_POWER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvm/copula.hpp"
#include "cvm/critical_values.hpp"
#include "cvm/spectral.hpp"

namespace cvm {

/// Drifted spectrum of one subset statistic of cardinality card under the
/// family's score at independence (ambient dimension d matters for families
/// whose drift lives only on the full set).
WeightedChiSquareSum subset_drift_spectrum(Family f, int card, int d,
                                           int truncation = 0);

/// Drifted merged spectrum of L (or W when weighted), optionally pairs only.
WeightedChiSquareSum combination_drift_spectrum(Family f, bool weighted,
                                                int d, bool pairs_only,
                                                int truncation = 0);

/// P(X_delta > q) for a drifted spectrum: one Gil-Pelaez inversion.
double beta_spectrum(const WeightedChiSquareSum& s, double q, double delta);

/// Local power of the linear (or pairwise-linear) and weighted combinations:
/// survival of the drifted spectrum beyond its own null (1-alpha)-quantile.
double beta_L(Family f, int d, double delta, double alpha,
              bool pairs_only = false, int truncation = 0);
double beta_W(Family f, int d, double delta, double alpha,
              int truncation = 0);

/// Local power of the dependogram: 1 - prod_A {1 - beta_A(alpha', delta)},
/// computed once per cardinality (the drifts are exchangeable).
double beta_M(Family f, int d, double delta, double alpha,
              bool pairs_only = false, int truncation = 0);

struct McEstimate {
  double beta = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo power of the Fisher combination on a delta grid with common
/// random numbers across grid points.
std::vector<McEstimate> beta_T_mc_grid(Family f, int d,
                                       std::span<const double> deltas,
                                       double alpha, std::size_t reps,
                                       std::uint64_t seed,
                                       bool pairs_only = false,
                                       int truncation = 0);
McEstimate beta_T_mc(Family f, int d, double delta, double alpha,
                     std::size_t reps, std::uint64_t seed,
                     bool pairs_only = false, int truncation = 0);

/// Monte Carlo power of the global statistic via the covariance sampler,
/// with common random numbers across the grid. q_b is the null critical
/// value; pass 0 to estimate it from an independent run at the same m.
std::vector<McEstimate> beta_B_mc_grid(Family f, int d,
                                       std::span<const double> deltas,
                                       double alpha, std::size_t m,
                                       std::size_t reps, std::uint64_t seed,
                                       double q_b = 0.0);
McEstimate beta_B_mc(Family f, int d, double delta, double alpha,
                     std::size_t m, std::size_t reps, std::uint64_t seed,
                     double q_b = 0.0);

struct PowerPoint {
  double delta;
  double beta;
  double std_error;  // 0 for analytic inversion
};

struct PowerCurve {
  std::string statistic;
  std::string family;
  int d = 0;
  double alpha = 0.05;
  std::string method;  // analytic-inversion | monte-carlo
  std::vector<PowerPoint> points;
};

struct PowerSettings {
  std::size_t points = 20;
  std::size_t reps = 10000;   // Monte Carlo statistics
  std::size_t dm_grid = 128;  // grid size for the global statistic
  std::size_t crit_reps = 100000;  // replications for the B critical value
  int truncation = 0;
  std::uint64_t seed = 1;
};

/// beta over an even delta grid from 0 to delta_max.
PowerCurve power_curve(StatisticId id, Family f, int d, double alpha,
                       double delta_max, const PowerSettings& s = {});

/// Delimited rows (delta beta stderr) under a commented header that records
/// the full configuration.
void write_power_curve(const PowerCurve& curve, const std::string& path);

}  // namespace cvm

#endif  // CVM_POWER_HPP_
