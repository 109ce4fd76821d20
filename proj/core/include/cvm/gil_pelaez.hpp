#ifndef CVM_GIL_PELAEZ_HPP_
#define CVM_GIL_PELAEZ_HPP_

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "cvm/spectral.hpp"

namespace cvm {

/// P(X > x) = 1/2 + (1/pi) int_0^inf Im{e^{-ixt} cf(t)}/t dt by the
/// trapezoidal rule on (0, K] with step h; `mean` is the t -> 0 limit of the
/// integrand. The node spacing only aliases mass beyond x + 2 pi / h
/// (Poisson summation), so the rule is spectrally accurate for these laws.
/// When x K is large the truncated tail is restored to first order by
/// integration by parts using cf(K).
double gil_pelaez_survival(
    const std::function<std::complex<double>(double)>& cf, double mean,
    double x, double k_upper, double step);

/// Adaptive truncation point: doubles K until the modulus envelope of the
/// spectrum is below 1e-12, or until the integration-by-parts tail estimate
/// at frequency x is below 1e-8. Throws if neither is reached by K = 2^26.
double inversion_upper_limit(const WeightedChiSquareSum& s, double x);

double survival(const WeightedChiSquareSum& s, double x, double delta = 0.0);

/// P(X <= q) = p by bisection (absolute tolerance 1e-8 relative to the
/// search interval) over [0, mean + 12 sd].
double quantile(const WeightedChiSquareSum& s, double p, double delta = 0.0);

/// P(X <= x) for a null spectrum: 1 - survival.
double qa_cdf(const WeightedChiSquareSum& s, double x);

/// The same CDF from the real-integral form
///   1/2 - (1/pi) int_0^inf sin{kappa0(x,t)} / {t zeta0(t)} dt,
/// kappa0 = -xt/2 + (1/2) sum arctan(w t), zeta0 = prod (1+w^2 t^2)^{1/4},
/// whose frequency variable is half that of the characteristic function.
/// Kept as an independent consistency check on qa_cdf.
double qa_cdf_alt(const WeightedChiSquareSum& s, double x);

/// Characteristic function of a weighted chi-square sum sampled once on a
/// uniform grid; survival/density evaluations for many x then cost one pass
/// over the grid each (the e^{-ixt} factor is applied by rotation).
class CfGrid {
 public:
  CfGrid(const WeightedChiSquareSum& s, double delta, double x_max);

  double survival(double x) const;
  double density(double x) const;
  double quantile(double p) const;

  double step() const { return h_; }
  double mean() const { return mean_; }
  double x_max() const { return x_max_; }
  const std::vector<std::complex<double>>& values() const { return phi_; }

 private:
  double h_;
  double mean_;
  double x_max_;
  std::vector<std::complex<double>> phi_;  // cf(k h), k = 1..M
};

/// Piecewise-linear interpolant of the null CDF on [0, mean + 40 sd], for
/// Monte Carlo loops that evaluate the CDF millions of times.
class NullCdfTable {
 public:
  explicit NullCdfTable(const WeightedChiSquareSum& s,
                        std::size_t points = 4096);
  double cdf(double x) const;
  double x_max() const { return x_max_; }

 private:
  double x_max_;
  std::vector<double> cdf_;
};

}  // namespace cvm

#endif  // CVM_GIL_PELAEZ_HPP_
