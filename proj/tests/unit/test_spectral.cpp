#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cvm/copula.hpp"
#include "cvm/critical_values.hpp"
#include "cvm/gil_pelaez.hpp"
#include "cvm/special.hpp"
#include "cvm/spectral.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("null spectrum moments match the exact eigenvalue sums") {
  for (int card = 2; card <= 5; ++card) {
    auto s = cvm::subset_null_spectrum(card);
    CHECK(s.mean() ==
          doctest::Approx(std::pow(1.0 / 6.0, card)).epsilon(1e-12));
    CHECK(s.variance() ==
          doctest::Approx(2.0 * std::pow(1.0 / 90.0, card)).epsilon(1e-12));
  }
}

TEST_CASE("leading eigenvalue group") {
  auto s = cvm::subset_null_spectrum(2);
  REQUIRE_FALSE(s.groups().empty());
  // gamma = (1,1): lambda = pi^-4, and no other index pair shares it.
  CHECK(s.groups().front().weight ==
        doctest::Approx(std::pow(kPi, -4.0)).epsilon(1e-14));
  CHECK(s.groups().front().count == doctest::Approx(1.0));
  for (std::size_t i = 1; i < s.groups().size(); ++i)
    CHECK(s.groups()[i].weight <= s.groups()[i - 1].weight);
}

TEST_CASE("characteristic function basics") {
  auto s = cvm::subset_null_spectrum(3);
  CHECK(std::abs(s.cf(0.0) - 1.0) < 1e-14);
  for (double t : {0.5, 3.0, 40.0})
    CHECK(std::abs(s.cf(t)) ==
          doctest::Approx(std::exp(s.log_modulus(t))).epsilon(1e-10));
}

TEST_CASE("folding small groups preserves the moments") {
  auto s = cvm::subset_null_spectrum(2);
  auto folded = cvm::subset_null_spectrum(2);
  folded.fold(1e-5);
  CHECK(folded.groups().size() < s.groups().size());
  CHECK(folded.mean() == doctest::Approx(s.mean()).epsilon(1e-13));
  CHECK(folded.variance() == doctest::Approx(s.variance()).epsilon(1e-13));
  for (double t : {1.0, 10.0})
    CHECK(std::abs(folded.cf(t) - s.cf(t)) < 1e-6);
}

TEST_CASE("inversion reproduces the chi-square(1) tail") {
  cvm::WeightedChiSquareSum s;
  s.add_group(1.0, 1.0, 0.0);
  CHECK(cvm::survival(s, 3.841459) == doctest::Approx(0.05).epsilon(2e-5));
  for (double x : {1.0, 2.5, 6.0})
    CHECK(cvm::survival(s, x) ==
          doctest::Approx(1.0 - cvm::chi_square_cdf(x, 1)).epsilon(1e-4));
}

TEST_CASE("quantile round trip") {
  auto s = cvm::subset_null_spectrum(2);
  for (double p : {0.5, 0.95, 0.99}) {
    const double q = cvm::quantile(s, p);
    CHECK(cvm::survival(s, q) == doctest::Approx(1.0 - p).epsilon(1e-4));
  }
}

TEST_CASE("the two printed CDF forms agree") {
  for (int card : {2, 3}) {
    auto s = cvm::subset_null_spectrum(card);
    for (double x : {0.01, 0.02, 0.05, 0.1, 0.3, 1.0}) {
      const double a = cvm::qa_cdf(s, x);
      const double b = cvm::qa_cdf_alt(s, x);
      CHECK(a == doctest::Approx(b).epsilon(1e-4));
      CHECK(std::abs(a - b) < 1e-6);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
    }
  }
}

TEST_CASE("sampling matches the analytic moments and quantile") {
  auto s = cvm::subset_null_spectrum(2);
  s.fold();
  std::mt19937_64 rng(31);
  const std::size_t reps = 20000;
  std::vector<double> draws(reps);
  double mean = 0.0;
  for (auto& v : draws) {
    v = s.sample(rng);
    mean += v;
  }
  mean /= reps;
  double var = 0.0;
  for (double v : draws) var += (v - mean) * (v - mean);
  var /= reps - 1;
  CHECK(mean == doctest::Approx(s.mean()).epsilon(0.02));
  CHECK(var == doctest::Approx(s.variance()).epsilon(0.1));

  std::sort(draws.begin(), draws.end());
  const double q_mc = draws[static_cast<std::size_t>(0.95 * reps)];
  CHECK(q_mc == doctest::Approx(cvm::quantile(s, 0.95)).epsilon(0.05));
}

TEST_CASE("common-random-number draws interpolate the drift") {
  cvm::WeightedChiSquareSum s;
  s.add_group(0.5, 1.0, 2.0);
  s.add_group(0.125, 3.0, 1.0);
  s.add_tail(0.01, 1e-4, 0.05);
  std::mt19937_64 rng(5);
  double m0 = 0.0, m1 = 0.0;
  const int reps = 40000;
  for (int i = 0; i < reps; ++i) {
    auto c = s.draw(rng);
    m0 += s.value(c, 0.0);
    m1 += s.value(c, 1.0);
  }
  CHECK(m0 / reps == doctest::Approx(s.mean(0.0)).epsilon(0.02));
  CHECK(m1 / reps == doctest::Approx(s.mean(1.0)).epsilon(0.02));
  // value(c, 0) and sample() agree in law; spot-check positivity.
  auto c = s.draw(rng);
  CHECK(s.value(c, 0.0) >= 0.0);
}

TEST_CASE("drifted spectrum mean shift equals the drift norm") {
  // For the Frank pair drift, sum lambda I^2 = int mu^2 = 1/3600 (Parseval),
  // so mean(delta) - mean(0) = delta^2 / 3600.
  cvm::SpectrumTerm term;
  term.card = 2;
  term.coeff = [](std::span<const int> g) {
    return cvm::fourier_coeff(cvm::Family::kFrank, 0b11, 2, g);
  };
  term.total_drift_norm = cvm::drift_norm(cvm::Family::kFrank, 0b11, 2);
  auto s = cvm::build_spectrum({&term, 1});
  CHECK(s.mean(1.0) - s.mean() ==
        doctest::Approx(1.0 / 3600.0).epsilon(1e-9));
  CHECK(s.mean(2.0) - s.mean() ==
        doctest::Approx(4.0 / 3600.0).epsilon(1e-9));
  // Drift enters through delta^2 only.
  CHECK(s.variance(1.5) == s.variance(-1.5));
  CHECK(std::abs(s.cf(0.7, 1.0) - s.cf(0.7, -1.0)) < 1e-14);
}

TEST_CASE("null CDF table tracks the inversion CDF") {
  auto s = cvm::subset_null_spectrum(2);
  cvm::NullCdfTable table(s);
  cvm::CfGrid grid(s, 0.0, s.mean() + 40.0 * std::sqrt(s.variance()));
  for (double x : {0.01, 0.03, 0.06, 0.1, 0.2})
    CHECK(table.cdf(x) ==
          doctest::Approx(1.0 - grid.survival(x)).epsilon(1e-4));
  CHECK(table.cdf(0.0) == 0.0);
  CHECK(table.cdf(100.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("grid evaluator matches pointwise inversion") {
  auto s = cvm::subset_null_spectrum(3);
  cvm::CfGrid grid(s, 0.0, 0.2);
  for (double x : {0.005, 0.02, 0.08, 0.15})
    CHECK(grid.survival(x) == doctest::Approx(cvm::survival(s, x)).epsilon(1e-6));
  CHECK(grid.quantile(0.95) ==
        doctest::Approx(cvm::quantile(s, 0.95)).epsilon(1e-5));
}

TEST_CASE("Fisher chi-square critical value") {
  CHECK(cvm::chi_square_quantile(0.95, 8) ==
        doctest::Approx(15.5073).epsilon(1e-5));
  CHECK(cvm::chi_square_quantile(0.95, 6) ==
        doctest::Approx(12.5916).epsilon(1e-5));
}

TEST_CASE("covariance sampler reproduces the limit mean") {
  // int Lambda(u,u) du = 1/36 for d = 2 and 7/216 for d = 3.
  auto d2 = cvm::dm_sample_B(64, 0.0, cvm::Family::kFrank, 2, 17, 1500);
  double m2 = 0.0;
  for (double v : d2) m2 += v;
  CHECK(m2 / d2.size() == doctest::Approx(1.0 / 36.0).epsilon(0.08));

  auto d3 = cvm::dm_sample_B(64, 0.0, cvm::Family::kFrank, 3, 18, 1200);
  double m3 = 0.0;
  for (double v : d3) m3 += v;
  CHECK(m3 / d3.size() == doctest::Approx(7.0 / 216.0).epsilon(0.08));
}

TEST_CASE("empirical quantile helper") {
  std::vector<double> draws(9999);
  for (std::size_t i = 0; i < draws.size(); ++i)
    draws[i] = static_cast<double>(i + 1) / 10000.0;  // uniform grid
  auto q = cvm::empirical_quantile(draws, 0.95);
  CHECK(q.value == doctest::Approx(0.95).epsilon(1e-3));
  CHECK(q.std_error > 0.0);
  CHECK(q.std_error < 0.01);
}
