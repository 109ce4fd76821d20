#include "cvm/gil_pelaez.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogEnvelopeTarget = -27.631021;  // log(1e-12)

double tail_by_parts(const std::complex<double>& phi_k, double x, double k) {
  // int_K^inf Im{e^{-ixt} cf(t)/t} dt ~ Im{e^{-ixK} cf(K)/(i x K)}
  if (!(x > 0.0)) return 0.0;
  const std::complex<double> e(std::cos(x * k), -std::sin(x * k));
  const std::complex<double> i(0.0, 1.0);
  return std::imag(e * phi_k / (i * x * k));
}

double pick_step(double x_max, double mean, double k_upper) {
  double h = kPi / (16.0 * std::max(1.0, x_max + mean));
  return std::min(h, k_upper / 2000.0);
}

}  // namespace

double gil_pelaez_survival(
    const std::function<std::complex<double>(double)>& cf, double mean,
    double x, double k_upper, double step) {
  const std::size_t m =
      static_cast<std::size_t>(std::ceil(k_upper / step));
  double acc = 0.5 * (mean - x);  // t -> 0 limit of the integrand
  std::complex<double> phi_last;
  for (std::size_t j = 1; j <= m; ++j) {
    const double t = step * static_cast<double>(j);
    const std::complex<double> phi = cf(t);
    const std::complex<double> e(std::cos(x * t), -std::sin(x * t));
    double f = std::imag(e * phi) / t;
    if (j == m) {
      phi_last = phi;
      f *= 0.5;
    }
    acc += f;
  }
  const double k_end = step * static_cast<double>(m);
  double p = 0.5 + (step * acc + tail_by_parts(phi_last, x, k_end)) / kPi;
  return std::clamp(p, 0.0, 1.0);
}

double inversion_upper_limit(const WeightedChiSquareSum& s, double x) {
  double k = 16.0;
  double lm = 0.0;
  for (; k <= 67108864.0; k *= 2.0) {
    lm = s.log_modulus(k);
    if (lm < kLogEnvelopeTarget) return k;
    if (x > 0.0 && x * k >= 10.0 && std::exp(lm) / (x * k) < 1e-8) return k;
  }
  throw std::runtime_error(
      "characteristic function envelope failed to decay (log-modulus " +
      std::to_string(lm) + " at the truncation cap)");
}

double survival(const WeightedChiSquareSum& s, double x, double delta) {
  const double k = inversion_upper_limit(s, x);
  const double h = pick_step(x, s.mean(delta), k);
  return gil_pelaez_survival(
      [&](double t) { return s.cf(t, delta); }, s.mean(delta), x, k, h);
}

double quantile(const WeightedChiSquareSum& s, double p, double delta) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile requires p in (0,1)");
  double hi = s.mean(delta) + 12.0 * std::sqrt(s.variance(delta));
  CfGrid grid(s, delta, hi);
  while (grid.survival(hi) > 1.0 - p) hi *= 2.0;
  double lo = 0.0;
  const double tol = 1e-8 * std::max(1.0, hi);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (grid.survival(mid) > 1.0 - p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double qa_cdf(const WeightedChiSquareSum& s, double x) {
  return 1.0 - survival(s, x);
}

double qa_cdf_alt(const WeightedChiSquareSum& s, double x) {
  // Same integral as survival() after t -> t/2; evaluated from the printed
  // real form as an independent implementation.
  const double k = 2.0 * inversion_upper_limit(s, x);
  const double h = 2.0 * pick_step(x, s.mean(), k / 2.0);
  const std::size_t m =
      static_cast<std::size_t>(std::ceil(k / h));
  double acc = 0.5 * 0.5 * (s.mean() - x);  // t -> 0 limit of the integrand
  for (std::size_t j = 1; j <= m; ++j) {
    const double t = h * static_cast<double>(j);
    double kappa = -0.5 * x * t + 0.5 * s.tail_mean() * t;
    double log_zeta = 0.125 * s.tail_variance() * t * t;
    for (const auto& g : s.groups()) {
      kappa += 0.5 * g.count * std::atan(g.weight * t);
      log_zeta += 0.25 * g.count * std::log1p(g.weight * g.weight * t * t);
    }
    double f = std::sin(kappa) * std::exp(-log_zeta) / t;
    if (j == m) f *= 0.5;
    acc += f;
  }
  return std::clamp(0.5 - h * acc / kPi, 0.0, 1.0);
}

CfGrid::CfGrid(const WeightedChiSquareSum& s, double delta, double x_max)
    : x_max_(x_max) {
  mean_ = s.mean(delta);
  const double k = inversion_upper_limit(s, x_max);
  h_ = pick_step(x_max, mean_, k);
  const std::size_t m = static_cast<std::size_t>(std::ceil(k / h_));
  if (m > 50000000)
    throw std::runtime_error("characteristic-function grid too large");
  phi_.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    phi_[j] = s.cf(h_ * static_cast<double>(j + 1), delta);
}

double CfGrid::survival(double x) const {
  const std::complex<double> rot(std::cos(x * h_), -std::sin(x * h_));
  std::complex<double> e = rot;
  double acc = 0.5 * (mean_ - x);
  const std::size_t m = phi_.size();
  for (std::size_t j = 0; j < m; ++j) {
    double f = std::imag(e * phi_[j]) / (h_ * static_cast<double>(j + 1));
    if (j + 1 == m) f *= 0.5;
    acc += f;
    e *= rot;
  }
  const double k_end = h_ * static_cast<double>(m);
  double p = 0.5 + (h_ * acc + tail_by_parts(phi_.back(), x, k_end)) / kPi;
  return std::clamp(p, 0.0, 1.0);
}

double CfGrid::density(double x) const {
  const std::complex<double> rot(std::cos(x * h_), -std::sin(x * h_));
  std::complex<double> e = rot;
  double acc = 0.5;  // cf(0) = 1
  const std::size_t m = phi_.size();
  for (std::size_t j = 0; j < m; ++j) {
    double f = std::real(e * phi_[j]);
    if (j + 1 == m) f *= 0.5;
    acc += f;
    e *= rot;
  }
  return std::max(0.0, h_ * acc / kPi);
}

double CfGrid::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile requires p in (0,1)");
  double lo = 0.0, hi = x_max_;
  if (survival(hi) > 1.0 - p)
    throw std::runtime_error("quantile exceeds the grid's x range");
  const double tol = 1e-8 * std::max(1.0, hi);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (survival(mid) > 1.0 - p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

NullCdfTable::NullCdfTable(const WeightedChiSquareSum& s,
                           std::size_t points) {
  if (points < 16) throw std::invalid_argument("table needs >= 16 points");
  x_max_ = s.mean() + 40.0 * std::sqrt(s.variance());
  CfGrid grid(s, 0.0, x_max_);
  cdf_.resize(points);
  double prev = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = x_max_ * static_cast<double>(i) /
                     static_cast<double>(points - 1);
    double c = i == 0 ? 0.0 : 1.0 - grid.survival(x);
    c = std::max(c, prev);  // enforce monotonicity against quadrature noise
    cdf_[i] = c;
    prev = c;
  }
}

double NullCdfTable::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= x_max_) return cdf_.back();
  const double pos = x / x_max_ * static_cast<double>(cdf_.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return cdf_[i] + frac * (cdf_[i + 1] - cdf_[i]);
}

}  // namespace cvm
