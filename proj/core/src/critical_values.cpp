#include "cvm/critical_values.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cvm/gil_pelaez.hpp"
#include "cvm/ranks.hpp"
#include "cvm/special.hpp"
#include "cvm/statistics.hpp"

namespace cvm {

StatisticId statistic_from_string(const std::string& name) {
  if (name == "B") return StatisticId::kB;
  if (name == "L") return StatisticId::kL;
  if (name == "W") return StatisticId::kW;
  if (name == "M") return StatisticId::kM;
  if (name == "T") return StatisticId::kT;
  if (name == "L2") return StatisticId::kL2;
  if (name == "M2") return StatisticId::kM2;
  if (name == "T2") return StatisticId::kT2;
  throw std::invalid_argument("unknown statistic: " + name);
}

std::string statistic_name(StatisticId id) {
  switch (id) {
    case StatisticId::kB: return "B";
    case StatisticId::kL: return "L";
    case StatisticId::kW: return "W";
    case StatisticId::kM: return "M";
    case StatisticId::kT: return "T";
    case StatisticId::kL2: return "L2";
    case StatisticId::kM2: return "M2";
    case StatisticId::kT2: return "T2";
  }
  return "?";
}

bool is_pairwise(StatisticId id) {
  return id == StatisticId::kL2 || id == StatisticId::kM2 ||
         id == StatisticId::kT2;
}

WeightedChiSquareSum subset_null_spectrum(int card, int truncation) {
  SpectrumTerm term;
  term.card = card;
  term.truncation = truncation;
  const SpectrumTerm terms[] = {term};
  auto s = build_spectrum(terms);
  s.fold();
  return s;
}

WeightedChiSquareSum combination_null_spectrum(bool weighted, int d,
                                               bool pairs_only,
                                               int truncation) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  std::vector<SpectrumTerm> terms;
  double choose = 1.0;  // C(d, c)
  for (int c = 2; c <= (pairs_only ? 2 : d); ++c) {
    choose = 1.0;
    for (int j = 0; j < c; ++j) choose = choose * (d - j) / (j + 1);
    SpectrumTerm term;
    term.card = c;
    term.count = choose;
    term.scale = weighted ? std::pow(std::numbers::pi, 2.0 * c) : 1.0;
    term.truncation = truncation;
    terms.push_back(term);
  }
  auto s = build_spectrum(terms);
  s.fold();
  return s;
}

double subset_quantile(int card, double p, int truncation) {
  return quantile(subset_null_spectrum(card, truncation), p);
}

std::map<int, double> dependogram_quantiles(int d, double alpha,
                                            bool pairs_only,
                                            int truncation) {
  const double level = pairs_only ? alpha_double_prime(alpha, d)
                                  : alpha_prime(alpha, d);
  std::map<int, double> out;
  for (int c = 2; c <= (pairs_only ? 2 : d); ++c)
    out[c] = subset_quantile(c, 1.0 - level, truncation);
  return out;
}

std::map<int, double> finite_sample_dependogram_quantiles(
    int d, double alpha, bool pairs_only, std::size_t n, std::size_t reps,
    std::uint64_t seed) {
  const double level =
      pairs_only ? alpha_double_prime(alpha, d) : alpha_prime(alpha, d);
  std::mt19937_64 rng(seed);
  std::map<int, std::vector<double>> draws;
  std::vector<int> perm(n);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    RankMatrix r;
    r.n = n;
    r.d = static_cast<std::size_t>(d);
    r.ranks.resize(n * static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i + 1);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < n; ++i)
        r.ranks[i * static_cast<std::size_t>(d) +
                static_cast<std::size_t>(j)] = perm[i];
    }
    for (const auto& [mask, v] : subset_statistics(r, pairs_only).per_subset)
      draws[cardinality(mask)].push_back(v);
  }
  std::map<int, double> out;
  for (auto& [card, values] : draws)
    out[card] = empirical_quantile(std::move(values), 1.0 - level).value;
  return out;
}

double dm_value(const DmDraw& d, double delta, std::size_t m) {
  return (d.a + delta * d.b + delta * delta * d.e) /
         static_cast<double>(m);
}

namespace {

/// Covariance of the independence copula process between two points.
double lambda_cov(const std::vector<double>& u, const std::vector<double>& v,
                  int d) {
  double c_min = 1.0, cu = 1.0, cv = 1.0, ratio = 0.0;
  for (int j = 0; j < d; ++j) {
    c_min *= std::min(u[j], v[j]);
    cu *= u[j];
    cv *= v[j];
  }
  for (int j = 0; j < d; ++j) ratio += std::min(u[j], v[j]) / (u[j] * v[j]);
  return c_min + (d - 1.0) * cu * cv - cu * cv * ratio;
}

}  // namespace

std::vector<DmDraw> dm_draws(std::size_t m, Family family, int d,
                             std::uint64_t seed, std::size_t reps) {
  if (m < 2) throw std::invalid_argument("grid size m must be >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(std::nextafter(0.0, 1.0), 1.0);
  std::normal_distribution<double> normal;

  std::vector<DmDraw> out;
  out.reserve(reps);
  const auto mi = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd sigma(mi, mi);
  Eigen::VectorXd z(mi), g(mi), drift(mi);
  std::vector<std::vector<double>> pts(m, std::vector<double>(d));

  for (std::size_t rep = 0; rep < reps; ++rep) {
    for (std::size_t i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) pts[i][j] = unif(rng);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = lambda_cov(pts[i], pts[j], d);
        sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        sigma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }

    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 1e-12;
    for (;;) {
      Eigen::MatrixXd jittered = sigma;
      jittered.diagonal().array() += jitter;
      llt.compute(jittered);
      if (llt.info() == Eigen::Success) break;
      jitter *= 10.0;
      if (jitter > 1e-8)
        throw std::runtime_error(
            "covariance factorization failed even with diagonal jitter");
    }

    for (Eigen::Index i = 0; i < mi; ++i) z(i) = normal(rng);
    g = llt.matrixL() * z;
    for (std::size_t i = 0; i < m; ++i)
      drift(static_cast<Eigen::Index>(i)) = drift_cdot(family, pts[i]);

    DmDraw draw;
    draw.a = g.squaredNorm();
    draw.b = 2.0 * g.dot(drift);
    draw.e = drift.squaredNorm();
    out.push_back(draw);
  }
  return out;
}

std::vector<double> dm_sample_B(std::size_t m, double delta, Family family,
                                int d, std::uint64_t seed, std::size_t reps) {
  const auto draws = dm_draws(m, family, d, seed, reps);
  std::vector<double> out(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i)
    out[i] = dm_value(draws[i], delta, m);
  return out;
}

CriticalValue empirical_quantile(std::vector<double> draws, double p) {
  if (draws.empty()) throw std::invalid_argument("no draws");
  std::sort(draws.begin(), draws.end());
  const std::size_t n = draws.size();
  const std::size_t i = std::min(
      n - 1, static_cast<std::size_t>(p * static_cast<double>(n)));
  CriticalValue cv;
  cv.value = draws[i];
  const std::size_t w = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  const std::size_t lo = i > w ? i - w : 0;
  const std::size_t hi = std::min(n - 1, i + w);
  const double density =
      static_cast<double>(hi - lo) / static_cast<double>(n) /
      std::max(draws[hi] - draws[lo], 1e-300);
  cv.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / density;
  return cv;
}

namespace {

std::string cache_key(StatisticId id, int d, double alpha,
                      const CriticalValueSettings& s) {
  std::ostringstream os;
  os.precision(17);
  os << statistic_name(id) << "|d=" << d << "|alpha=" << alpha
     << "|method=" << s.method << "|reps=" << s.reps << "|m=" << s.dm_grid
     << "|n=" << s.sample_n << "|trunc=" << s.truncation
     << "|seed=" << s.seed;
  return os.str();
}

bool cache_lookup(const std::string& path, const std::string& key,
                  CriticalValue* out) {
  std::ifstream in(path);
  if (!in) return false;
  nlohmann::json j;
  try {
    in >> j;
  } catch (...) {
    return false;
  }
  if (!j.contains(key)) return false;
  out->value = j[key]["value"].get<double>();
  out->std_error = j[key]["std_error"].get<double>();
  return true;
}

void cache_store(const std::string& path, const std::string& key,
                 const CriticalValue& cv) {
  nlohmann::json j;
  {
    std::ifstream in(path);
    if (in) {
      try {
        in >> j;
      } catch (...) {
        j = nlohmann::json::object();
      }
    }
  }
  j[key] = {{"value", cv.value}, {"std_error", cv.std_error}};
  std::ofstream out(path);
  out << j.dump(1) << "\n";
}

CriticalValue finite_sample_mc(StatisticId id, int d, double alpha,
                               const CriticalValueSettings& s) {
  const bool pairs = is_pairwise(id);
  const std::size_t n = s.sample_n;
  std::mt19937_64 rng(s.seed);

  // Asymptotic per-cardinality CDFs for the Fisher variants.
  std::map<int, NullCdfTable> tables;
  if (id == StatisticId::kT || id == StatisticId::kT2) {
    for (int c = 2; c <= (pairs ? 2 : d); ++c)
      tables.emplace(c, NullCdfTable(subset_null_spectrum(c, s.truncation)));
  }

  std::vector<double> draws;
  draws.reserve(s.reps);
  std::vector<int> perm(n);
  for (std::size_t rep = 0; rep < s.reps; ++rep) {
    RankMatrix r;
    r.n = n;
    r.d = static_cast<std::size_t>(d);
    r.ranks.resize(n * static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i + 1);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < n; ++i)
        r.ranks[i * static_cast<std::size_t>(d) +
                static_cast<std::size_t>(j)] = perm[i];
    }
    switch (id) {
      case StatisticId::kB:
        draws.push_back(cvm_global(r));
        break;
      case StatisticId::kL:
      case StatisticId::kL2:
        draws.push_back(combine_linear(subset_statistics(r, pairs)));
        break;
      case StatisticId::kW:
        draws.push_back(combine_weighted(subset_statistics(r, false)));
        break;
      case StatisticId::kT:
      case StatisticId::kT2:
        draws.push_back(combine_fisher(
            subset_statistics(r, pairs),
            [&](int card, double x) { return tables.at(card).cdf(x); },
            nullptr));
        break;
      default:
        throw std::invalid_argument(
            "finite-sample-mc supports B, L, W, T and pairwise variants");
    }
  }
  return empirical_quantile(std::move(draws), 1.0 - alpha);
}

}  // namespace

CriticalValue critical_value(StatisticId id, int d, double alpha,
                             const CriticalValueSettings& settings) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");

  const std::string key = cache_key(id, d, alpha, settings);
  CriticalValue cv;
  if (!settings.cache_path.empty() &&
      cache_lookup(settings.cache_path, key, &cv))
    return cv;

  // The dependogram statistic rejects when the max ratio exceeds 1.
  if (id == StatisticId::kM || id == StatisticId::kM2) {
    cv = {1.0, 0.0};
  } else if (settings.method == "finite-sample-mc") {
    cv = finite_sample_mc(id, d, alpha, settings);
  } else if (id == StatisticId::kT || id == StatisticId::kT2) {
    cv = {chi_square_quantile(1.0 - alpha,
                              fisher_df(d, id == StatisticId::kT2)),
          0.0};
  } else if (id == StatisticId::kB) {
    if (settings.method == "inversion")
      throw std::invalid_argument(
          "the global statistic has no explicit spectrum; use spectral-mc");
    cv = empirical_quantile(
        dm_sample_B(settings.dm_grid, 0.0, Family::kFrank, d, settings.seed,
                    settings.reps),
        1.0 - alpha);
  } else {
    const bool weighted = id == StatisticId::kW;
    const auto spec = combination_null_spectrum(weighted, d, is_pairwise(id),
                                                settings.truncation);
    if (settings.method == "inversion") {
      cv = {quantile(spec, 1.0 - alpha), 0.0};
    } else if (settings.method == "spectral-mc") {
      std::mt19937_64 rng(settings.seed);
      std::vector<double> draws(settings.reps);
      for (auto& x : draws) x = spec.sample(rng);
      cv = empirical_quantile(std::move(draws), 1.0 - alpha);
    } else {
      throw std::invalid_argument("unknown method: " + settings.method);
    }
  }

  if (!settings.cache_path.empty()) cache_store(settings.cache_path, key, cv);
  return cv;
}

}  // namespace cvm
