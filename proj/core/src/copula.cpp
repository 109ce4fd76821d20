#include "cvm/copula.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "cvm/special.hpp"

namespace cvm {

namespace {

constexpr double kPi = std::numbers::pi;

void require_interior(std::span<const double> u) {
  for (double v : u)
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument(
          "drift evaluation requires a point strictly inside (0,1)^d");
}

double product_all(std::span<const double> u) {
  double p = 1.0;
  for (double v : u) p *= v;
  return p;
}

double lambda_of(std::span<const int> gamma) {
  double l = 1.0;
  for (int g : gamma) l *= 1.0 / ((kPi * g) * (kPi * g));
  return l;
}

bool all_odd(std::span<const int> gamma) {
  for (int g : gamma)
    if (g % 2 == 0) return false;
  return true;
}

void require_gamma(SubsetMask a, std::span<const int> gamma) {
  if (static_cast<int>(gamma.size()) != cardinality(a))
    throw std::invalid_argument("gamma must hold |A| indices");
  for (int g : gamma)
    if (g < 1) throw std::invalid_argument("gamma entries must be >= 1");
}

}  // namespace

Family family_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(c));
  if (s == "gaussian" || s == "normal") return Family::kGaussian;
  if (s == "fgm" || s == "farlie-gumbel-morgenstern") return Family::kFgm;
  if (s == "frank") return Family::kFrank;
  if (s == "amh" || s == "ali-mikhail-haq") return Family::kAmh;
  if (s == "clayton") return Family::kClayton;
  if (s == "gumbel-barnett" || s == "gumbelbarnett")
    return Family::kGumbelBarnett;
  if (s == "gumbel-hougaard" || s == "gumbelhougaard")
    return Family::kGumbelHougaard;
  throw std::invalid_argument("unknown copula family: " + name);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::kGaussian: return "gaussian";
    case Family::kFgm: return "fgm";
    case Family::kFrank: return "frank";
    case Family::kAmh: return "amh";
    case Family::kClayton: return "clayton";
    case Family::kGumbelBarnett: return "gumbel-barnett";
    case Family::kGumbelHougaard: return "gumbel-hougaard";
  }
  return "?";
}

std::function<double(double)> generator_derivative(Family f) {
  switch (f) {
    case Family::kFrank:
      return [](double t) { return (t - 1.0) / 2.0; };
    case Family::kAmh:
      return [](double t) { return t - 1.0 - std::log(t); };
    case Family::kClayton:
      return [](double t) { return 0.5 * std::log(t) * std::log(t); };
    case Family::kGumbelBarnett:
      return [](double t) { return -0.5 * std::log(t) * std::log(t); };
    case Family::kGumbelHougaard:
      return [](double t) {
        if (t >= 1.0) return 0.0;  // -log(t)*log(log(1/t)) -> 0 as t -> 1
        const double lt = std::log(t);
        return -lt * std::log(-lt);
      };
    default:
      throw std::invalid_argument(family_name(f) + " is not Archimedean");
  }
}

double drift_cdot(Family f, std::span<const double> u) {
  require_interior(u);
  const int d = static_cast<int>(u.size());
  const double c0 = product_all(u);
  switch (f) {
    case Family::kGaussian: {
      double s = 0.0;
      std::vector<double> ratio(u.size());
      for (std::size_t j = 0; j < u.size(); ++j)
        ratio[j] = norm_pdf(norm_quantile(u[j])) / u[j];
      for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t k = j + 1; k < u.size(); ++k)
          s += ratio[j] * ratio[k];
      return c0 * s;
    }
    case Family::kFgm: {
      double p = 1.0;
      for (double v : u) p *= v * (1.0 - v);
      return p;
    }
    case Family::kFrank:
    case Family::kAmh:
    case Family::kClayton:
    case Family::kGumbelBarnett:
    case Family::kGumbelHougaard: {
      const auto phidot = generator_derivative(f);
      double s = phidot(c0);
      for (double v : u) s -= phidot(v);
      return c0 * s;
    }
  }
  throw std::logic_error("unreachable");
  (void)d;
}

double archimedean_mu(const std::function<double(double)>& phidot,
                      SubsetMask a, std::span<const double> u) {
  require_valid_subset(a, static_cast<int>(u.size()));
  require_interior(u);
  const auto js = members(a);
  double c0a = 1.0;
  for (int j : js) c0a *= u[j - 1];
  const int card = cardinality(a);
  double sum = 0.0;
  for (SubsetMask b : sub_subsets(a)) {
    double c0b = 1.0;
    for (int j : members(b)) c0b *= u[j - 1];
    const int sign = ((card - cardinality(b)) % 2 == 0) ? 1 : -1;
    sum += sign * phidot(c0b);
  }
  return c0a * sum;
}

double drift_mu(Family f, SubsetMask a, std::span<const double> u) {
  require_valid_subset(a, static_cast<int>(u.size()));
  require_interior(u);
  const int d = static_cast<int>(u.size());
  const auto js = members(a);
  const int card = cardinality(a);
  switch (f) {
    case Family::kGaussian: {
      if (card != 2) return 0.0;
      double p = 1.0;
      for (int j : js) p *= norm_pdf(norm_quantile(u[j - 1]));
      return p;
    }
    case Family::kFgm: {
      if (a != full_set(d)) return 0.0;
      double p = 1.0;
      for (double v : u) p *= v * (1.0 - v);
      return (d % 2 == 0 ? 1.0 : -1.0) * p;
    }
    case Family::kFrank:
    case Family::kAmh: {
      double p = 1.0;
      for (int j : js) p *= u[j - 1] * (u[j - 1] - 1.0);
      return (f == Family::kFrank ? 0.5 : 1.0) * p;
    }
    case Family::kClayton:
    case Family::kGumbelBarnett: {
      if (card != 2) return 0.0;
      double p = 1.0;
      for (int j : js) p *= u[j - 1] * std::log(u[j - 1]);
      return (f == Family::kClayton ? 1.0 : -1.0) * p;
    }
    case Family::kGumbelHougaard:
      return archimedean_mu(generator_derivative(f), a, u);
  }
  throw std::logic_error("unreachable");
}

double gaussian_sine_coefficient(int k) {
  if (k < 1) throw std::invalid_argument("index must be >= 1");
  static std::vector<double> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) < k) {
    std::vector<double> nodes, weights;
    gauss_legendre(24, 0.0, 1.0, nodes, weights);
    const int panels = 96;
    for (int kk = static_cast<int>(cache.size()) + 1; kk <= std::max(k, 48);
         ++kk) {
      // int_{-8}^{8} pdf(z)^2 sin(kk*pi*Phi(z)) dz
      double v = 0.0;
      for (int p = 0; p < panels; ++p) {
        const double a = -8.0 + 16.0 * p / panels;
        const double b = -8.0 + 16.0 * (p + 1) / panels;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
          const double z = a + (b - a) * nodes[q];
          const double w = (b - a) * weights[q];
          const double pdf = norm_pdf(z);
          v += w * pdf * pdf * std::sin(kk * kPi * norm_cdf(z));
        }
      }
      cache.push_back(v);
    }
  }
  return cache[k - 1];
}

double fourier_coeff(Family f, SubsetMask a, int d,
                     std::span<const int> gamma) {
  require_valid_subset(a, d);
  require_gamma(a, gamma);
  const int card = cardinality(a);
  switch (f) {
    case Family::kGaussian: {
      if (card != 2) return 0.0;
      return 2.0 * kPi * kPi * gamma[0] * gamma[1] *
             gaussian_sine_coefficient(gamma[0]) *
             gaussian_sine_coefficient(gamma[1]);
    }
    case Family::kFgm: {
      if (a != full_set(d) || !all_odd(gamma)) return 0.0;
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      return sign * std::pow(2.0, 2.5 * d) * lambda_of(gamma);
    }
    case Family::kFrank:
    case Family::kAmh: {
      if (!all_odd(gamma)) return 0.0;
      const double sign = (card % 2 == 0) ? 1.0 : -1.0;
      const double base = sign * std::pow(2.0, 2.5 * card - 1.0) *
                          lambda_of(gamma);
      return (f == Family::kAmh ? 2.0 : 1.0) * base;
    }
    case Family::kClayton:
    case Family::kGumbelBarnett: {
      if (card != 2) return 0.0;
      double v = 2.0 / (kPi * kPi);
      for (int g : gamma) v *= sine_integral(g * kPi) / g;
      return (f == Family::kClayton ? 1.0 : -1.0) * v;
    }
    case Family::kGumbelHougaard:
      throw std::invalid_argument(
          "gumbel-hougaard drift is not of product form; Fourier "
          "coefficients are unsupported");
  }
  throw std::logic_error("unreachable");
}

double drift_norm(Family f, SubsetMask a, int d) {
  require_valid_subset(a, d);
  const int card = cardinality(a);
  switch (f) {
    case Family::kGaussian:
      // (int pdf(z)^3 dz)^2 = (1/(2 pi sqrt 3))^2 per pair
      return card == 2 ? 1.0 / (12.0 * kPi * kPi) : 0.0;
    case Family::kFgm:
      return a == full_set(d) ? std::pow(1.0 / 30.0, d) : 0.0;
    case Family::kFrank:
      return 0.25 * std::pow(1.0 / 30.0, card);
    case Family::kAmh:
      return std::pow(1.0 / 30.0, card);
    case Family::kClayton:
    case Family::kGumbelBarnett:
      // int_0^1 (u log u)^2 du = 2/27 per coordinate
      return card == 2 ? (2.0 / 27.0) * (2.0 / 27.0) : 0.0;
    case Family::kGumbelHougaard: {
      if (card > 3)
        throw std::invalid_argument(
            "gumbel-hougaard drift norm quadrature limited to |A| <= 3");
      const auto phidot = generator_derivative(f);
      std::vector<double> nodes, weights;
      gauss_legendre(64, 0.0, 1.0, nodes, weights);
      const auto js = members(a);
      std::vector<double> u(d, 0.5);
      double sum = 0.0;
      const std::size_t k = nodes.size();
      std::vector<std::size_t> ix(card, 0);
      while (true) {
        double w = 1.0;
        for (int c = 0; c < card; ++c) {
          u[js[c] - 1] = nodes[ix[c]];
          w *= weights[ix[c]];
        }
        const double m = archimedean_mu(phidot, a, u);
        sum += w * m * m;
        int c = 0;
        for (; c < card; ++c) {
          if (++ix[c] < k) break;
          ix[c] = 0;
        }
        if (c == card) break;
      }
      return sum;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

/// Logarithmic-series variate on {1,2,...} with parameter p in (0,1).
std::uint64_t sample_log_series(double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double v = unif(rng);
  if (v >= p) return 1;
  const double q = 1.0 - std::exp(unif(rng) * std::log1p(-p));
  if (v <= q * q) {
    const double x = 1.0 + std::log(v) / std::log(q);
    return static_cast<std::uint64_t>(std::max(1.0, std::floor(x)));
  }
  return v <= q ? 2 : 1;
}

void cholesky_equicorrelated(int d, double rho, std::vector<double>& l) {
  // Lower Cholesky factor of the d x d equicorrelation matrix.
  std::vector<double> m(d * d, rho);
  for (int i = 0; i < d; ++i) m[i * d + i] = 1.0;
  l.assign(d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = m[i * d + j];
      for (int k = 0; k < j; ++k) s -= l[i * d + k] * l[j * d + k];
      if (i == j) {
        if (s <= 0.0)
          throw std::invalid_argument(
              "gaussian equicorrelation matrix not positive definite; "
              "rho must lie in (-1/(d-1), 1)");
        l[i * d + i] = std::sqrt(s);
      } else {
        l[i * d + j] = s / l[j * d + j];
      }
    }
}

}  // namespace

Dataset sample(Family f, double theta, std::size_t n, std::size_t d,
               std::uint64_t seed) {
  if (n < 2 || d < 2)
    throw std::invalid_argument("sampling requires n >= 2 and d >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(
      std::nextafter(0.0, 1.0), 1.0);
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> values(n * d);

  switch (f) {
    case Family::kGaussian: {
      const double rho = theta;
      if (!(rho > -1.0 / (d - 1.0) && rho < 1.0))
        throw std::invalid_argument(
            "gaussian rho must lie in (-1/(d-1), 1)");
      std::vector<double> l;
      cholesky_equicorrelated(static_cast<int>(d), rho, l);
      std::vector<double> z(d);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) z[j] = normal(rng);
        for (std::size_t j = d; j-- > 0;) {
          double x = 0.0;
          for (std::size_t k = 0; k <= j; ++k) x += l[j * d + k] * z[k];
          values[i * d + j] = norm_cdf(x);
        }
      }
      break;
    }
    case Family::kFgm: {
      if (!(theta >= -1.0 && theta <= 1.0))
        throw std::invalid_argument("fgm theta must lie in [-1,1]");
      std::vector<double> u(d);
      for (std::size_t i = 0; i < n; ++i) {
        while (true) {
          double p = 1.0;
          for (std::size_t j = 0; j < d; ++j) {
            u[j] = unif(rng);
            p *= 1.0 - 2.0 * u[j];
          }
          const double dens = 1.0 + theta * p;
          if (unif(rng) * (1.0 + std::abs(theta)) <= dens) break;
        }
        for (std::size_t j = 0; j < d; ++j) values[i * d + j] = u[j];
      }
      break;
    }
    case Family::kClayton: {
      if (!(theta >= 0.0))
        throw std::invalid_argument("clayton theta must be >= 0");
      if (theta == 0.0) {
        for (auto& v : values) v = unif(rng);
        break;
      }
      std::gamma_distribution<double> gamma(1.0 / theta, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double g = gamma(rng);
        for (std::size_t j = 0; j < d; ++j)
          // Laplace transform of Gamma(1/theta, 1) is (1+s)^{-1/theta}, so
          // psi(E/V) with psi(s) = (1+s)^{-1/theta} has uniform margins.
          values[i * d + j] = std::pow(1.0 + expo(rng) / g, -1.0 / theta);
      }
      break;
    }
    case Family::kFrank: {
      if (!(theta >= 0.0))
        throw std::invalid_argument("frank sampling requires theta >= 0");
      if (theta == 0.0) {
        for (auto& v : values) v = unif(rng);
        break;
      }
      const double p = 1.0 - std::exp(-theta);
      for (std::size_t i = 0; i < n; ++i) {
        const double m = static_cast<double>(sample_log_series(p, rng));
        for (std::size_t j = 0; j < d; ++j) {
          const double e = expo(rng) / m;
          // inverse generator of Frank at e
          double u = -std::log1p(std::exp(-e) * (std::exp(-theta) - 1.0)) /
                     theta;
          values[i * d + j] = std::clamp(u, 1e-15, 1.0 - 1e-15);
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("sampling not supported for family " +
                                  family_name(f));
  }
  return make_dataset(n, d, std::move(values));
}

}  // namespace cvm
