#include "cvm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>

namespace cvm {

namespace {
constexpr double kPi = std::numbers::pi;
}

void WeightedChiSquareSum::add_group(double weight, double count,
                                     double drift_ncp) {
  if (!(weight > 0.0) || !(count > 0.0) || drift_ncp < 0.0)
    throw std::invalid_argument("spectral group needs weight, count > 0");
  groups_.push_back({weight, count, drift_ncp});
}

void WeightedChiSquareSum::add_tail(double mean, double variance,
                                    double drift_mean) {
  tail_mean_ += mean;
  tail_var_ += variance;
  tail_drift_ += std::max(0.0, drift_mean);
}

void WeightedChiSquareSum::fold(double threshold) {
  std::vector<SpectralGroup> kept;
  kept.reserve(groups_.size());
  for (const auto& g : groups_) {
    if (g.weight < threshold) {
      tail_mean_ += g.weight * g.count;
      tail_var_ += 2.0 * g.weight * g.weight * g.count;
      tail_drift_ += g.weight * g.drift_ncp;
    } else {
      kept.push_back(g);
    }
  }
  groups_ = std::move(kept);
}

double WeightedChiSquareSum::mean(double delta) const {
  const double d2 = delta * delta;
  double m = tail_mean_ + d2 * tail_drift_;
  for (const auto& g : groups_)
    m += g.weight * (g.count + d2 * g.drift_ncp);
  return m;
}

double WeightedChiSquareSum::variance(double delta) const {
  const double d2 = delta * delta;
  double v = tail_var_;
  for (const auto& g : groups_)
    v += g.weight * g.weight * (2.0 * g.count + 4.0 * d2 * g.drift_ncp);
  return v;
}

std::complex<double> WeightedChiSquareSum::log_cf(double t,
                                                 double delta) const {
  // log E exp(it w chisq'(m, ncp)) =
  //   -(m/2) log(1 - 2iwt) + i w t ncp / (1 - 2iwt)
  const double d2 = delta * delta;
  std::complex<double> lc(0.0, 0.0);
  for (const auto& g : groups_) {
    const double s = g.weight * t;
    const double den = 1.0 + 4.0 * s * s;
    lc += std::complex<double>(-0.25 * g.count * std::log(den),
                               0.5 * g.count * std::atan(2.0 * s));
    const double ncp = d2 * g.drift_ncp;
    if (ncp != 0.0)
      lc += std::complex<double>(-2.0 * ncp * s * s / den, ncp * s / den);
  }
  lc += std::complex<double>(-0.5 * tail_var_ * t * t,
                             (tail_mean_ + d2 * tail_drift_) * t);
  return lc;
}

std::complex<double> WeightedChiSquareSum::cf(double t, double delta) const {
  return std::exp(log_cf(t, delta));
}

double WeightedChiSquareSum::log_modulus(double t) const {
  double lm = -0.5 * tail_var_ * t * t;
  for (const auto& g : groups_) {
    const double s = g.weight * t;
    lm -= 0.25 * g.count * std::log1p(4.0 * s * s);
  }
  return lm;
}

WeightedChiSquareSum::CrnDraw WeightedChiSquareSum::draw(
    std::mt19937_64& rng) const {
  CrnDraw c;
  c.z.resize(groups_.size());
  c.central.resize(groups_.size());
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    c.z[i] = normal(rng);
    const double dof = groups_[i].count - 1.0;
    if (dof > 0.0) {
      std::gamma_distribution<double> gamma(0.5 * dof, 2.0);
      c.central[i] = gamma(rng);
    } else {
      c.central[i] = 0.0;
    }
  }
  return c;
}

double WeightedChiSquareSum::value(const CrnDraw& c, double delta) const {
  if (c.z.size() != groups_.size())
    throw std::invalid_argument("CRN draw does not match this spectrum");
  const double d2 = delta * delta;
  double x = tail_mean_ + d2 * tail_drift_;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto& g = groups_[i];
    const double shifted = c.z[i] + delta * std::sqrt(g.drift_ncp);
    x += g.weight * (shifted * shifted + c.central[i]);
  }
  return x;
}

double WeightedChiSquareSum::sample(std::mt19937_64& rng,
                                    double delta) const {
  return value(draw(rng), delta);
}

int default_truncation(int card) {
  if (card < 2) throw std::invalid_argument("cardinality must be >= 2");
  if (card <= 3) return 40;
  if (card == 4) return 20;
  if (card == 5) return 12;
  return 8;
}

WeightedChiSquareSum build_spectrum(std::span<const SpectrumTerm> terms) {
  WeightedChiSquareSum out;
  std::map<std::pair<double, std::int64_t>, std::pair<double, double>>
      groups;  // (scale, prod gamma) -> (count, sum I^2)
  struct TailAcc {
    double mean = 0.0, var = 0.0, drift = 0.0;
  } tail;

  for (const auto& term : terms) {
    const int c = term.card;
    if (c < 2) throw std::invalid_argument("cardinality must be >= 2");
    const int n_per =
        term.truncation > 0 ? term.truncation : default_truncation(c);
    if (std::pow(static_cast<double>(n_per), c) > 1e8)
      throw std::invalid_argument(
          "spectrum enumeration would exceed the 1e8 index guard");

    const double inv_pi2c = std::pow(kPi, -2.0 * c);
    std::vector<int> gamma(c, 1);
    double kept_lambda = 0.0;      // sum lambda over enumerated gamma
    double kept_lambda2 = 0.0;     // sum lambda^2
    double kept_drift = 0.0;       // sum lambda I^2
    std::map<std::int64_t, std::pair<double, double>> local;
    while (true) {
      std::int64_t p = 1;
      for (int j = 0; j < c; ++j) p *= gamma[j];
      const double lambda = inv_pi2c / (static_cast<double>(p) * p);
      double i2 = 0.0;
      if (term.coeff) {
        const double coef = term.coeff(gamma);
        i2 = coef * coef;
      }
      auto& slot = local[p];
      slot.first += 1.0;
      slot.second += i2;
      kept_lambda += lambda;
      kept_lambda2 += lambda * lambda;
      kept_drift += lambda * i2;

      int j = 0;
      for (; j < c; ++j) {
        if (++gamma[j] <= n_per) break;
        gamma[j] = 1;
      }
      if (j == c) break;
    }

    for (const auto& [p, slot] : local) {
      const double lambda = inv_pi2c / (static_cast<double>(p) * p);
      auto& g = groups[{term.scale * lambda, p}];
      g.first += term.count * slot.first;
      g.second += term.count * slot.second;
    }

    // Exact totals: sum_all lambda = (1/6)^c, sum_all lambda^2 = (1/90)^c.
    const double full1 = std::pow(1.0 / 6.0, c);
    const double full2 = std::pow(1.0 / 90.0, c);
    tail.mean += term.scale * term.count * (full1 - kept_lambda);
    tail.var += 2.0 * term.scale * term.scale * term.count *
                (full2 - kept_lambda2);
    if (term.coeff)
      tail.drift += term.scale * term.count *
                    std::max(0.0, term.total_drift_norm - kept_drift);
  }

  std::vector<std::pair<std::pair<double, std::int64_t>,
                        std::pair<double, double>>>
      sorted(groups.begin(), groups.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.first.first > b.first.first;
  });
  for (const auto& [key, slot] : sorted)
    out.add_group(key.first, slot.first, slot.second);
  out.add_tail(tail.mean, tail.var, tail.drift);
  return out;
}

}  // namespace cvm
