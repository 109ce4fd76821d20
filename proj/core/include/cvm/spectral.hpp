#ifndef CVM_SPECTRAL_HPP_
#define CVM_SPECTRAL_HPP_

#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace cvm {

/// One group of equal-weight terms in a weighted chi-square sum
/// X = sum_g weight_g * chisq'(count_g, delta^2 * drift_ncp_g) + tail.
/// Groups arise because the Karhunen-Loeve eigenvalues
/// lambda_gamma = prod (pi gamma_j)^-2 depend on gamma only through the
/// integer product of its entries.
struct SpectralGroup {
  double weight;     ///< common eigenvalue (times any combination scale)
  double count;      ///< degrees of freedom pooled into the group
  double drift_ncp;  ///< sum of squared Fourier coefficients (times delta^2)
};

/// Distribution of a weighted sum of (noncentral) chi-square variables with
/// an analytic Gaussian tail correction for the truncated remainder. This is
/// the limit law of the subset statistics and of their linear/weighted
/// combinations.
class WeightedChiSquareSum {
 public:
  void add_group(double weight, double count, double drift_ncp);

  /// Closed-form remainder beyond the enumerated terms: mean and variance of
  /// the neglected central part, plus the delta^2 coefficient of the
  /// neglected drift mean.
  void add_tail(double mean, double variance, double drift_mean);

  /// Move groups with weight below the threshold into the tail correction.
  void fold(double threshold = 3e-8);

  double mean(double delta = 0.0) const;
  double variance(double delta = 0.0) const;

  std::complex<double> log_cf(double t, double delta = 0.0) const;
  std::complex<double> cf(double t, double delta = 0.0) const;

  /// log |cf(t)| at delta = 0; an upper envelope for every delta.
  double log_modulus(double t) const;

  /// One draw of the truncated sum plus the deterministic tail-mean shift.
  double sample(std::mt19937_64& rng, double delta = 0.0) const;

  /// Common-random-numbers decomposition: the same draw evaluated across a
  /// delta grid. `z` holds one standard normal per group, `central` one
  /// chi-square_{count-1} draw per group.
  struct CrnDraw {
    std::vector<double> z;
    std::vector<double> central;
  };
  CrnDraw draw(std::mt19937_64& rng) const;
  double value(const CrnDraw& c, double delta) const;

  const std::vector<SpectralGroup>& groups() const { return groups_; }
  double tail_mean() const { return tail_mean_; }
  double tail_variance() const { return tail_var_; }
  double tail_drift() const { return tail_drift_; }

 private:
  std::vector<SpectralGroup> groups_;
  double tail_mean_ = 0.0;
  double tail_var_ = 0.0;
  double tail_drift_ = 0.0;
};

/// One cardinality block of a combined spectrum: `count` i.i.d. subset
/// processes of cardinality `card`, each entering with weight `scale`.
/// `coeff(gamma)` returns the Fourier coefficient I_gamma (leave empty for a
/// null-only spectrum); `total_drift_norm` is int mu_A^2, used to correct the
/// truncated drift mean (Parseval: sum_gamma lambda_gamma I_gamma^2 = I_A).
struct SpectrumTerm {
  int card = 2;
  double scale = 1.0;
  double count = 1.0;
  std::function<double(std::span<const int>)> coeff;
  double total_drift_norm = 0.0;
  int truncation = 0;  ///< per-index cutoff; 0 selects the default
};

/// Per-index truncation default: 40 for |A| <= 3, 20 for |A| = 4, 12 for
/// |A| = 5, 8 beyond.
int default_truncation(int card);

/// Enumerate the multi-index spectra of all terms, group equal eigenvalues,
/// and attach exact factorized tail sums (sum_k (pi k)^-2 = 1/6,
/// sum_k (pi k)^-4 = 1/90).
WeightedChiSquareSum build_spectrum(std::span<const SpectrumTerm> terms);

}  // namespace cvm

#endif  // CVM_SPECTRAL_HPP_
