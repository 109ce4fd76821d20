#ifndef CVM_EFFICIENCY_HPP_
#define CVM_EFFICIENCY_HPP_

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cvm/copula.hpp"
#include "cvm/critical_values.hpp"
#include "cvm/spectral.hpp"

namespace cvm {

/// Density at a fixed point x of X0 + w chi2_2, where X0 follows the null
/// law of a weighted chi-square spectrum:
///   h_w(x) = (1/pi) int_0^inf Re{ e^{-ixt} cf0(t) / (1 - 2itw) } dt.
/// The x-dependent factor e^{-ixt} cf0(t) is precomputed once on a grid, so
/// each evaluation at a new shift w is a single pass over the grid.
class ShiftedDensityEvaluator {
 public:
  ShiftedDensityEvaluator(const WeightedChiSquareSum& base, double x);
  double density(double w) const;  // w >= 0; w = 0 gives the base density

 private:
  double h_;
  std::vector<std::complex<double>> psi_;  // e^{-ix t_k} cf0(t_k)
};

/// d beta / d(delta^2) at delta = 0 of the test that rejects when the
/// spectrum's statistic exceeds q: sum_g w_g ncp_g h_{w_g}(q) plus the
/// folded-tail contribution at the base density.
double spectrum_curvature(const WeightedChiSquareSum& s, double q);

/// Local power curvature lim_{delta->0} {beta(alpha,delta) - alpha}/delta^2
/// for the combination statistics L, L2, W, M, M2.
double curvature(StatisticId id, Family f, int d, double alpha,
                 int truncation = 0);

struct AreRow {
  std::string family;
  std::string best;                        // statistic with max curvature
  std::map<std::string, double> percent;   // curvature / best * 100
};

/// Relative efficiencies of {L, L2, M, M2, W} per family, each reported as a
/// percentage of the family's best statistic.
std::vector<AreRow> are_table(std::span<const Family> families, int d,
                              double alpha, int truncation = 0);

void write_are_table(std::span<const AreRow> rows, const std::string& path);

/// Least-squares slope of log P(X > x) against x over an even grid; the
/// asymptote is -1/(2 w_max) with w_max the largest weight.
double tail_rate_check(const WeightedChiSquareSum& s, double x_lo,
                       double x_hi, int points);

}  // namespace cvm

#endif  // CVM_EFFICIENCY_HPP_
