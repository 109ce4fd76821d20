#include "cvm/special.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvm {

double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double norm_quantile(double p) {
  static const boost::math::normal_distribution<double> dist;
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("norm_quantile requires p in (0,1)");
  return boost::math::quantile(dist, p);
}

namespace {

double si_series(double x) {
  // x - x^3/(3*3!) + x^5/(5*5!) - ...
  double term = x;
  double sum = x;
  const double x2 = x * x;
  for (int n = 1; n < 200; ++n) {
    term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
    const double contrib = term / (2.0 * n + 1.0);
    sum += contrib;
    if (std::abs(contrib) < 1e-16 * std::abs(sum)) break;
  }
  return sum;
}

double si_quad_segment(double a, double b) {
  using boost::math::quadrature::gauss;
  return gauss<double, 30>::integrate(
      [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }, a, b);
}

}  // namespace

double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x <= 16.0) return si_series(x);
  // Integrate onward from 16 in pi-length panels.
  double v = si_series(16.0);
  double a = 16.0;
  while (a < x) {
    const double b = std::min(a + std::numbers::pi, x);
    v += si_quad_segment(a, b);
    a = b;
  }
  return v;
}

double chi_square_cdf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi-square df must be >= 1");
  if (x <= 0.0) return 0.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(dist, x);
}

double chi_square_quantile(double p, int df) {
  if (df < 1) throw std::invalid_argument("chi-square df must be >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("chi-square quantile requires p in (0,1)");
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::quantile(dist, p);
}

void gauss_legendre(std::size_t k, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on Legendre polynomials.
  nodes.resize(k);
  weights.resize(k);
  const std::size_t m = (k + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = k * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[i] = 0.5 * (b + a) - 0.5 * (b - a) * x;
    nodes[k - 1 - i] = 0.5 * (b + a) + 0.5 * (b - a) * x;
    weights[i] = weights[k - 1 - i] = 0.5 * (b - a) * w;
  }
}

}  // namespace cvm
