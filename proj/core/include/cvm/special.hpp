#ifndef CVM_SPECIAL_HPP_
#define CVM_SPECIAL_HPP_

#include <cstddef>
#include <vector>

namespace cvm {

double norm_pdf(double z);
double norm_cdf(double z);
double norm_quantile(double p);

/// Sine integral SI(x) = int_0^x sin(t)/t dt. Alternating power series for
/// |x| <= 16, series value at 16 plus panel quadrature beyond.
double sine_integral(double x);

double chi_square_cdf(double x, int df);
double chi_square_quantile(double p, int df);

/// Nodes and weights of the k-point Gauss-Legendre rule on [a,b].
void gauss_legendre(std::size_t k, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace cvm

#endif  // CVM_SPECIAL_HPP_
