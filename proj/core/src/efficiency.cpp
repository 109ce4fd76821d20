#include "cvm/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "cvm/gil_pelaez.hpp"
#include "cvm/power.hpp"
#include "cvm/statistics.hpp"

namespace cvm {

namespace {
constexpr double kPi = std::numbers::pi;

double binomial(int d, int c) {
  double v = 1.0;
  for (int j = 0; j < c; ++j) v = v * (d - j) / (j + 1);
  return v;
}
}  // namespace

ShiftedDensityEvaluator::ShiftedDensityEvaluator(
    const WeightedChiSquareSum& base, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("x must be positive");
  CfGrid grid(base, 0.0, x);
  h_ = grid.step();
  const auto& phi = grid.values();
  psi_.resize(phi.size());
  const std::complex<double> rot(std::cos(x * h_), -std::sin(x * h_));
  std::complex<double> e = rot;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    psi_[k] = e * phi[k];
    e *= rot;
  }
}

double ShiftedDensityEvaluator::density(double w) const {
  double acc = 0.5;  // t = 0: cf0(0)/(1 - 0) = 1
  const std::size_t m = psi_.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double t = h_ * static_cast<double>(k + 1);
    const std::complex<double> den(1.0, -2.0 * t * w);
    double f = std::real(psi_[k] / den);
    if (k + 1 == m) f *= 0.5;
    acc += f;
  }
  return std::max(0.0, h_ * acc / kPi);
}

double spectrum_curvature(const WeightedChiSquareSum& s, double q) {
  ShiftedDensityEvaluator eval(s, q);
  double curv = 0.0;
  for (const auto& g : s.groups())
    if (g.drift_ncp > 0.0)
      curv += g.weight * g.drift_ncp * eval.density(g.weight);
  if (s.tail_drift() > 0.0) curv += s.tail_drift() * eval.density(0.0);
  return curv;
}

double curvature(StatisticId id, Family f, int d, double alpha,
                 int truncation) {
  const bool pairs = is_pairwise(id);
  switch (id) {
    case StatisticId::kL:
    case StatisticId::kL2:
    case StatisticId::kW: {
      const auto spec = combination_drift_spectrum(
          f, id == StatisticId::kW, d, pairs, truncation);
      const double q = quantile(spec, 1.0 - alpha, 0.0);
      return spectrum_curvature(spec, q);
    }
    case StatisticId::kM:
    case StatisticId::kM2: {
      const double level =
          pairs ? alpha_double_prime(alpha, d) : alpha_prime(alpha, d);
      double sum = 0.0;
      for (int c = 2; c <= (pairs ? 2 : d); ++c) {
        const auto spec = subset_drift_spectrum(f, c, d, truncation);
        const double q = subset_quantile(c, 1.0 - level, truncation);
        sum += binomial(d, c) * spectrum_curvature(spec, q);
      }
      return (1.0 - alpha) / (1.0 - level) * sum;
    }
    default:
      throw std::invalid_argument(
          "no analytic curvature for statistic " + statistic_name(id));
  }
}

std::vector<AreRow> are_table(std::span<const Family> families, int d,
                              double alpha, int truncation) {
  const StatisticId ids[] = {StatisticId::kL, StatisticId::kL2,
                             StatisticId::kM, StatisticId::kM2,
                             StatisticId::kW};
  std::vector<AreRow> rows;
  for (Family f : families) {
    AreRow row;
    row.family = family_name(f);
    std::map<std::string, double> curv;
    double best = 0.0;
    for (StatisticId id : ids) {
      const double c = curvature(id, f, d, alpha, truncation);
      curv[statistic_name(id)] = c;
      if (c > best) {
        best = c;
        row.best = statistic_name(id);
      }
    }
    if (!(best > 0.0))
      throw std::runtime_error("family " + row.family +
                               " has no locally powerful statistic");
    for (const auto& [name, c] : curv)
      row.percent[name] = 100.0 * c / best;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_are_table(std::span<const AreRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(6);
  out << "# family best L L2 M M2 W\n";
  for (const auto& row : rows) {
    out << row.family << " " << row.best;
    for (const char* name : {"L", "L2", "M", "M2", "W"})
      out << " " << row.percent.at(name);
    out << "\n";
  }
}

double tail_rate_check(const WeightedChiSquareSum& s, double x_lo,
                       double x_hi, int points) {
  if (points < 2 || !(x_hi > x_lo) || !(x_lo > 0.0))
    throw std::invalid_argument("need an increasing positive x grid");
  CfGrid grid(s, 0.0, x_hi);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (int i = 0; i < points; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / (points - 1);
    const double p = grid.survival(x);
    if (!(p > 1e-11)) continue;  // below inversion accuracy
    const double y = std::log(p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2)
    throw std::runtime_error(
        "survival underflowed on the whole grid; widen it downward");
  const double n = static_cast<double>(used);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cvm
