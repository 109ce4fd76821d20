#ifndef CVM_COPULA_HPP_
#define CVM_COPULA_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "cvm/dataset.hpp"
#include "cvm/subset.hpp"

namespace cvm {

/// Copula families with a known score at independence. For every family the
/// independence parameter is theta0 = 0 (the Gaussian parameter is the
/// equicorrelation rho).
enum class Family {
  kGaussian,
  kFgm,
  kFrank,
  kAmh,
  kClayton,
  kGumbelBarnett,
  kGumbelHougaard,
};

Family family_from_string(const std::string& name);
std::string family_name(Family f);

/// Parameter derivative of the copula at independence, dC_theta/dtheta at
/// theta0, evaluated at an interior point of the unit cube.
double drift_cdot(Family f, std::span<const double> u);

/// Mobius drift mu_A = M_A(Cdot_theta0), family closed forms.
double drift_mu(Family f, SubsetMask a, std::span<const double> u);

/// Generic Archimedean drift: mu_A(u) = C0(u^A) sum_{B subset A}
/// (-1)^{|A\B|} phidot{C0(u^B)}, for a generator derivative phidot at
/// independence.
double archimedean_mu(const std::function<double(double)>& phidot,
                      SubsetMask a, std::span<const double> u);

/// Generator derivative at independence (phidot_theta0) for the Archimedean
/// families; throws for Gaussian and FGM.
std::function<double(double)> generator_derivative(Family f);

/// Fourier coefficient I_{gamma,A} of the drift against the product-sine
/// eigenbasis. gamma holds |A| indices >= 1; d is the ambient dimension
/// (the FGM drift lives only on the full set). Throws for Gumbel-Hougaard
/// (non-product drift).
double fourier_coeff(Family f, SubsetMask a, int d,
                     std::span<const int> gamma);

/// g(k) = int_0^1 pdf(quantile(u)) sin(k pi u) du for the Gaussian drift,
/// by quadrature after the u = Phi(z) substitution.
double gaussian_sine_coefficient(int k);

/// Drift norm I_A = int mu_A^2 du: closed form for product drifts,
/// quadrature for Gumbel-Hougaard (|A| <= 3).
double drift_norm(Family f, SubsetMask a, int d);

/// n i.i.d. d-vectors with uniform margins from C_theta. Supported:
/// Gaussian (rho in (-1/(d-1),1)), FGM (|theta| <= 1), Clayton (theta >= 0),
/// Frank (theta >= 0).
Dataset sample(Family f, double theta, std::size_t n, std::size_t d,
               std::uint64_t seed);

}  // namespace cvm

#endif  // CVM_COPULA_HPP_
