#include "cvm/power.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cvm/gil_pelaez.hpp"
#include "cvm/special.hpp"
#include "cvm/statistics.hpp"

namespace cvm {

namespace {

double binomial(int d, int c) {
  double v = 1.0;
  for (int j = 0; j < c; ++j) v = v * (d - j) / (j + 1);
  return v;
}

SpectrumTerm drift_term(Family f, int card, int d, int truncation) {
  SpectrumTerm t;
  t.card = card;
  t.truncation = truncation;
  const SubsetMask a = (SubsetMask{1} << card) - 1;  // {1,...,card}
  t.total_drift_norm = drift_norm(f, a, d);
  if (t.total_drift_norm > 0.0)
    t.coeff = [f, a, d](std::span<const int> gamma) {
      return fourier_coeff(f, a, d, gamma);
    };
  return t;
}

}  // namespace

WeightedChiSquareSum subset_drift_spectrum(Family f, int card, int d,
                                           int truncation) {
  const SpectrumTerm terms[] = {drift_term(f, card, d, truncation)};
  auto s = build_spectrum(terms);
  s.fold();
  return s;
}

WeightedChiSquareSum combination_drift_spectrum(Family f, bool weighted,
                                                int d, bool pairs_only,
                                                int truncation) {
  std::vector<SpectrumTerm> terms;
  for (int c = 2; c <= (pairs_only ? 2 : d); ++c) {
    SpectrumTerm t = drift_term(f, c, d, truncation);
    t.count = binomial(d, c);
    t.scale = weighted ? std::pow(std::numbers::pi, 2.0 * c) : 1.0;
    terms.push_back(t);
  }
  auto s = build_spectrum(terms);
  s.fold();
  return s;
}

double beta_spectrum(const WeightedChiSquareSum& s, double q, double delta) {
  return survival(s, q, delta);
}

namespace {

double beta_linear_like(Family f, bool weighted, int d, double delta,
                        double alpha, bool pairs_only, int truncation) {
  const auto spec =
      combination_drift_spectrum(f, weighted, d, pairs_only, truncation);
  const double q = quantile(spec, 1.0 - alpha, 0.0);
  return survival(spec, q, delta);
}

}  // namespace

double beta_L(Family f, int d, double delta, double alpha, bool pairs_only,
              int truncation) {
  return beta_linear_like(f, false, d, delta, alpha, pairs_only, truncation);
}

double beta_W(Family f, int d, double delta, double alpha, int truncation) {
  return beta_linear_like(f, true, d, delta, alpha, false, truncation);
}

double beta_M(Family f, int d, double delta, double alpha, bool pairs_only,
              int truncation) {
  const double level =
      pairs_only ? alpha_double_prime(alpha, d) : alpha_prime(alpha, d);
  double accept = 1.0;
  for (int c = 2; c <= (pairs_only ? 2 : d); ++c) {
    const double q = subset_quantile(c, 1.0 - level, truncation);
    const auto spec = subset_drift_spectrum(f, c, d, truncation);
    const double beta_c = survival(spec, q, delta);
    accept *= std::pow(1.0 - beta_c, binomial(d, c));
  }
  return 1.0 - accept;
}

std::vector<McEstimate> beta_T_mc_grid(Family f, int d,
                                       std::span<const double> deltas,
                                       double alpha, std::size_t reps,
                                       std::uint64_t seed, bool pairs_only,
                                       int truncation) {
  if (reps < 1000)
    throw std::invalid_argument("Fisher power needs >= 1000 replications");
  const int cmax = pairs_only ? 2 : d;
  std::map<int, WeightedChiSquareSum> spectra;
  std::map<int, NullCdfTable> tables;
  for (int c = 2; c <= cmax; ++c) {
    spectra.emplace(c, subset_drift_spectrum(f, c, d, truncation));
    tables.emplace(c, NullCdfTable(subset_null_spectrum(c, truncation)));
  }
  const double q_t =
      chi_square_quantile(1.0 - alpha, fisher_df(d, pairs_only));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> hits(deltas.size(), 0);
  std::vector<double> t_stat(deltas.size());
  for (std::size_t rep = 0; rep < reps; ++rep) {
    std::fill(t_stat.begin(), t_stat.end(), 0.0);
    for (int c = 2; c <= cmax; ++c) {
      const auto& spec = spectra.at(c);
      const auto& table = tables.at(c);
      const int count = static_cast<int>(binomial(d, c) + 0.5);
      for (int sub = 0; sub < count; ++sub) {
        const auto draw = spec.draw(rng);
        for (std::size_t k = 0; k < deltas.size(); ++k) {
          const double b = spec.value(draw, deltas[k]);
          const double tail = std::max(1e-15, 1.0 - table.cdf(b));
          t_stat[k] += -2.0 * std::log(tail);
        }
      }
    }
    for (std::size_t k = 0; k < deltas.size(); ++k)
      if (t_stat[k] > q_t) ++hits[k];
  }

  std::vector<McEstimate> out(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const double b =
        static_cast<double>(hits[k]) / static_cast<double>(reps);
    out[k] = {b, std::sqrt(b * (1.0 - b) / static_cast<double>(reps))};
  }
  return out;
}

McEstimate beta_T_mc(Family f, int d, double delta, double alpha,
                     std::size_t reps, std::uint64_t seed, bool pairs_only,
                     int truncation) {
  const double deltas[] = {delta};
  return beta_T_mc_grid(f, d, deltas, alpha, reps, seed, pairs_only,
                        truncation)[0];
}

std::vector<McEstimate> beta_B_mc_grid(Family f, int d,
                                       std::span<const double> deltas,
                                       double alpha, std::size_t m,
                                       std::size_t reps, std::uint64_t seed,
                                       double q_b) {
  if (q_b <= 0.0)
    q_b = empirical_quantile(
              dm_sample_B(m, 0.0, f, d, seed ^ 0x9e3779b97f4a7c15ull, reps),
              1.0 - alpha)
              .value;
  const auto draws = dm_draws(m, f, d, seed, reps);
  std::vector<McEstimate> out(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    std::size_t hits = 0;
    for (const auto& dr : draws)
      if (dm_value(dr, deltas[k], m) > q_b) ++hits;
    const double b = static_cast<double>(hits) / static_cast<double>(reps);
    out[k] = {b, std::sqrt(b * (1.0 - b) / static_cast<double>(reps))};
  }
  return out;
}

McEstimate beta_B_mc(Family f, int d, double delta, double alpha,
                     std::size_t m, std::size_t reps, std::uint64_t seed,
                     double q_b) {
  const double deltas[] = {delta};
  return beta_B_mc_grid(f, d, deltas, alpha, m, reps, seed, q_b)[0];
}

PowerCurve power_curve(StatisticId id, Family f, int d, double alpha,
                       double delta_max, const PowerSettings& s) {
  if (s.points < 2) throw std::invalid_argument("curve needs >= 2 points");
  std::vector<double> deltas(s.points);
  for (std::size_t i = 0; i < s.points; ++i)
    deltas[i] = delta_max * static_cast<double>(i) /
                static_cast<double>(s.points - 1);

  PowerCurve curve;
  curve.statistic = statistic_name(id);
  curve.family = family_name(f);
  curve.d = d;
  curve.alpha = alpha;

  const bool pairs = is_pairwise(id);
  switch (id) {
    case StatisticId::kB: {
      curve.method = "monte-carlo";
      const double q_b =
          empirical_quantile(dm_sample_B(s.dm_grid, 0.0, f, d,
                                         s.seed ^ 0x9e3779b97f4a7c15ull,
                                         s.crit_reps),
                             1.0 - alpha)
              .value;
      const auto est = beta_B_mc_grid(f, d, deltas, alpha, s.dm_grid, s.reps,
                                      s.seed, q_b);
      for (std::size_t i = 0; i < deltas.size(); ++i)
        curve.points.push_back({deltas[i], est[i].beta, est[i].std_error});
      break;
    }
    case StatisticId::kT:
    case StatisticId::kT2: {
      curve.method = "monte-carlo";
      const auto est = beta_T_mc_grid(f, d, deltas, alpha, s.reps, s.seed,
                                      pairs, s.truncation);
      for (std::size_t i = 0; i < deltas.size(); ++i)
        curve.points.push_back({deltas[i], est[i].beta, est[i].std_error});
      break;
    }
    case StatisticId::kL:
    case StatisticId::kL2:
    case StatisticId::kW: {
      curve.method = "analytic-inversion";
      const auto spec = combination_drift_spectrum(
          f, id == StatisticId::kW, d, pairs, s.truncation);
      const double q = quantile(spec, 1.0 - alpha, 0.0);
      for (double delta : deltas)
        curve.points.push_back({delta, survival(spec, q, delta), 0.0});
      break;
    }
    case StatisticId::kM:
    case StatisticId::kM2: {
      curve.method = "analytic-inversion";
      const double level =
          pairs ? alpha_double_prime(alpha, d) : alpha_prime(alpha, d);
      std::vector<std::pair<WeightedChiSquareSum, double>> per_card;
      std::vector<double> counts;
      for (int c = 2; c <= (pairs ? 2 : d); ++c) {
        per_card.emplace_back(subset_drift_spectrum(f, c, d, s.truncation),
                              subset_quantile(c, 1.0 - level, s.truncation));
        counts.push_back(binomial(d, c));
      }
      for (double delta : deltas) {
        double accept = 1.0;
        for (std::size_t c = 0; c < per_card.size(); ++c) {
          const double beta_c =
              survival(per_card[c].first, per_card[c].second, delta);
          accept *= std::pow(1.0 - beta_c, counts[c]);
        }
        curve.points.push_back({delta, 1.0 - accept, 0.0});
      }
      break;
    }
  }
  return curve;
}

void write_power_curve(const PowerCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(10);
  out << "# statistic=" << curve.statistic << " family=" << curve.family
      << " d=" << curve.d << " alpha=" << curve.alpha
      << " method=" << curve.method << "\n";
  out << "# delta beta stderr\n";
  for (const auto& p : curve.points)
    out << p.delta << " " << p.beta << " " << p.std_error << "\n";
}

}  // namespace cvm
