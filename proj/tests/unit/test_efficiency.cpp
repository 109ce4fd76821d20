#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cvm/efficiency.hpp"
#include "cvm/gil_pelaez.hpp"
#include "cvm/power.hpp"

TEST_CASE("shifted density recovers the exponential limit") {
  // With a near-degenerate base (a tiny Gaussian tail term), X0 + w chi2_2 is
  // essentially w chi2_2, whose density is (1/2w) exp(-x/2w).
  cvm::WeightedChiSquareSum base;
  base.add_tail(0.0, 1e-8, 0.0);
  const double x = 0.5;
  cvm::ShiftedDensityEvaluator eval(base, x);
  for (double w : {0.25, 0.5, 1.0}) {
    const double expect = std::exp(-x / (2.0 * w)) / (2.0 * w);
    CHECK(eval.density(w) == doctest::Approx(expect).epsilon(1e-3));
  }
}

TEST_CASE("shifted density matches an augmented spectrum") {
  auto base = cvm::subset_null_spectrum(2);
  const double w = 0.03;
  auto augmented = cvm::subset_null_spectrum(2);
  augmented.add_group(w, 2.0, 0.0);
  cvm::CfGrid grid(augmented, 0.0, 1.0);
  for (double x : {0.05, 0.1, 0.2}) {
    cvm::ShiftedDensityEvaluator eval(base, x);
    CHECK(eval.density(w) == doctest::Approx(grid.density(x)).epsilon(1e-5));
    CHECK(eval.density(w) >= 0.0);
  }
}

TEST_CASE("augmented density integrates to one") {
  auto s = cvm::subset_null_spectrum(2);
  s.add_group(0.05, 2.0, 0.0);
  cvm::CfGrid grid(s, 0.0, 2.0);
  double mass = 0.0;
  const int m = 4000;
  const double x_hi = 1.5;
  for (int i = 0; i <= m; ++i) {
    const double x = x_hi * i / m;
    const double f = grid.density(x);
    CHECK(f >= 0.0);
    mass += (i == 0 || i == m) ? 0.5 * f : f;
  }
  mass *= x_hi / m;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("spectrum curvature equals the small-delta slope") {
  cvm::WeightedChiSquareSum s;
  s.add_group(0.5, 1.0, 1.0);
  s.add_group(0.2, 2.0, 0.5);
  s.add_tail(0.01, 1e-5, 0.02);
  const double q = cvm::quantile(s, 0.95);
  const double c = cvm::spectrum_curvature(s, q);
  CHECK(c > 0.0);

  // beta(delta) = alpha + c delta^2 + O(delta^4); eliminate the quartic term
  // by Richardson extrapolation in delta^2.
  const double b0 = cvm::beta_spectrum(s, q, 0.0);
  const double x1 = 0.0025, x2 = 0.01;
  const double s1 = (cvm::beta_spectrum(s, q, std::sqrt(x1)) - b0) / x1;
  const double s2 = (cvm::beta_spectrum(s, q, std::sqrt(x2)) - b0) / x2;
  const double slope = (x2 * s1 - x1 * s2) / (x2 - x1);
  CHECK(c == doctest::Approx(slope).epsilon(1e-3));
}

TEST_CASE("curvature is invariant under rescaling the statistic") {
  cvm::WeightedChiSquareSum s;
  s.add_group(0.4, 1.0, 0.8);
  s.add_group(0.1, 3.0, 0.3);
  const double q = cvm::quantile(s, 0.95);

  const double c = 7.0;
  cvm::WeightedChiSquareSum scaled;
  for (const auto& g : s.groups())
    scaled.add_group(c * g.weight, g.count, g.drift_ncp);
  CHECK(cvm::spectrum_curvature(scaled, c * q) ==
        doctest::Approx(cvm::spectrum_curvature(s, q)).epsilon(1e-6));
}

TEST_CASE("combination curvature matches the analytic power slope") {
  for (cvm::StatisticId id :
       {cvm::StatisticId::kL, cvm::StatisticId::kW, cvm::StatisticId::kM}) {
    const double c = cvm::curvature(id, cvm::Family::kFrank, 3, 0.05);
    REQUIRE(c > 0.0);
    auto beta = [&](double delta) {
      switch (id) {
        case cvm::StatisticId::kL:
          return cvm::beta_L(cvm::Family::kFrank, 3, delta, 0.05);
        case cvm::StatisticId::kW:
          return cvm::beta_W(cvm::Family::kFrank, 3, delta, 0.05);
        default:
          return cvm::beta_M(cvm::Family::kFrank, 3, delta, 0.05);
      }
    };
    // Richardson extrapolation in delta^2 removes the quartic term.
    const double b0 = beta(0.0);
    const double x1 = 0.04, x2 = 0.16;
    const double s1 = (beta(std::sqrt(x1)) - b0) / x1;
    const double s2 = (beta(std::sqrt(x2)) - b0) / x2;
    const double slope = (x2 * s1 - x1 * s2) / (x2 - x1);
    CHECK(c == doctest::Approx(slope).epsilon(0.02));
  }
}

TEST_CASE("relative efficiency table") {
  const cvm::Family fams[] = {cvm::Family::kFrank};
  auto rows = cvm::are_table(fams, 3, 0.05);
  REQUIRE(rows.size() == 1);
  const auto& row = rows.front();
  CHECK(row.family == "frank");
  REQUIRE(row.percent.size() == 5);
  double best_pct = 0.0;
  for (const auto& [name, pct] : row.percent) {
    CHECK(pct >= 0.0);
    CHECK(pct <= 100.0 + 1e-9);
    best_pct = std::max(best_pct, pct);
  }
  CHECK(best_pct == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(row.percent.at(row.best) == doctest::Approx(100.0).epsilon(1e-9));

  const std::string path = "cvm_test_are.dat";
  cvm::write_are_table(rows, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("family") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("tail decay rate") {
  cvm::WeightedChiSquareSum one;
  one.add_group(1.0, 1.0, 0.0);
  const double slope = cvm::tail_rate_check(one, 10.0, 25.0, 12);
  CHECK(slope / -0.5 == doctest::Approx(1.0).epsilon(0.1));

  auto pair = cvm::subset_null_spectrum(2);
  const double expected = -0.5 / pair.groups().front().weight;
  const double got = cvm::tail_rate_check(pair, 0.25, 0.45, 12);
  CHECK(got / expected == doctest::Approx(1.0).epsilon(0.1));
}
