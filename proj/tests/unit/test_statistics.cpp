#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "cvm/ranks.hpp"
#include "cvm/statistics.hpp"

namespace {

cvm::RankMatrix random_ranks(std::size_t n, std::size_t d,
                             std::mt19937_64& rng) {
  cvm::RankMatrix r;
  r.n = n;
  r.d = d;
  r.ranks.resize(n * d);
  std::vector<int> perm(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i + 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) r.ranks[i * d + j] = perm[i];
  }
  return r;
}

// B_{A,n} recomputed as the exact integral of the squared centered process:
// the process is constant on each grid cell, so the integral is the sum of
// squared midpoint values times the cell volume.
double cell_sum_subset(const cvm::RankMatrix& r, cvm::SubsetMask a) {
  const auto mem = cvm::members(a);
  const std::size_t n = r.n;
  std::vector<double> u(r.d, 0.5);
  std::vector<int> idx(mem.size(), 1);
  double total = 0.0;
  for (;;) {
    for (std::size_t k = 0; k < mem.size(); ++k)
      u[mem[k] - 1] = (idx[k] - 0.5) / static_cast<double>(n);
    const double g = cvm::mobius_process_centered(r, a, u);
    total += g * g;
    std::size_t k = 0;
    for (; k < mem.size(); ++k) {
      if (++idx[k] <= static_cast<int>(n)) break;
      idx[k] = 1;
    }
    if (k == mem.size()) break;
  }
  return total / std::pow(static_cast<double>(n), mem.size());
}

double cell_sum_global(const cvm::RankMatrix& r) {
  const std::size_t n = r.n, d = r.d;
  std::vector<double> u(d);
  std::vector<int> idx(d, 1);
  double total = 0.0;
  for (;;) {
    for (std::size_t j = 0; j < d; ++j)
      u[j] = (idx[j] - 0.5) / static_cast<double>(n);
    const double g = cvm::centered_copula_process(r, u);
    total += g * g;
    std::size_t j = 0;
    for (; j < d; ++j) {
      if (++idx[j] <= static_cast<int>(n)) break;
      idx[j] = 1;
    }
    if (j == d) break;
  }
  return total / std::pow(static_cast<double>(n), d);
}

}  // namespace

TEST_CASE("rank kernel values and symmetry") {
  CHECK(cvm::dn_kernel(1, 1, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(cvm::dn_kernel(1, 2, 2) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(cvm::dn_kernel(2, 2, 2) == doctest::Approx(0.125).epsilon(1e-15));
  for (int s = 1; s <= 5; ++s)
    for (int t = 1; t <= 5; ++t)
      CHECK(cvm::dn_kernel(s, t, 5) ==
            doctest::Approx(cvm::dn_kernel(t, s, 5)).epsilon(1e-14));
}

TEST_CASE("subset statistic hand value") {
  cvm::RankMatrix r;
  r.n = 2;
  r.d = 2;
  r.ranks = {1, 1, 2, 2};
  CHECK(cvm::cvm_subset(r, 0b11) ==
        doctest::Approx(0.03125).epsilon(1e-15));
}

TEST_CASE("subset statistic equals the cell-sum integral") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng() % 6, d = 2 + rng() % 3;
    auto r = random_ranks(n, d, rng);
    for (cvm::SubsetMask a : cvm::subsets_of_dimension(static_cast<int>(d)))
      CHECK(cvm::cvm_subset(r, a) ==
            doctest::Approx(cell_sum_subset(r, a)).epsilon(1e-12));
  }
}

TEST_CASE("global statistic equals the cell-sum integral") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 3 + rng() % 5, d = 2 + rng() % 2;
    auto r = random_ranks(n, d, rng);
    CHECK(cvm::cvm_global(r) ==
          doctest::Approx(cell_sum_global(r)).epsilon(1e-12));
    CHECK(cvm::cvm_global(r) >= 0.0);
  }
}

TEST_CASE("statistics depend on the data only through ranks") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const std::size_t n = 25, d = 3;
  std::vector<double> v(n * d), cubed(n * d);
  for (std::size_t i = 0; i < n * d; ++i) {
    v[i] = unif(rng);
    cubed[i] = v[i] * v[i] * v[i];
  }
  auto s1 = cvm::subset_statistics(
      cvm::compute_ranks(cvm::make_dataset(n, d, v)));
  auto s2 = cvm::subset_statistics(
      cvm::compute_ranks(cvm::make_dataset(n, d, cubed)));
  REQUIRE(s1.per_subset.size() == s2.per_subset.size());
  for (std::size_t k = 0; k < s1.per_subset.size(); ++k) {
    CHECK(s1.per_subset[k].first == s2.per_subset[k].first);
    CHECK(s1.per_subset[k].second == s2.per_subset[k].second);  // bit equal
  }
}

TEST_CASE("per-test levels") {
  CHECK(cvm::alpha_prime(0.05, 3) ==
        doctest::Approx(1.0 - std::pow(0.95, 0.25)).epsilon(1e-15));
  CHECK(cvm::alpha_prime(0.05, 3) == doctest::Approx(0.0127415).epsilon(1e-5));
  CHECK(cvm::alpha_double_prime(0.05, 3) ==
        doctest::Approx(1.0 - std::cbrt(0.95)).epsilon(1e-14));
  // d = 2: a single subset, both corrections reduce to alpha.
  CHECK(cvm::alpha_prime(0.05, 2) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(cvm::alpha_double_prime(0.05, 2) ==
        doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("combination rules") {
  cvm::SubsetStatistics stats;
  stats.n = 10;
  stats.d = 3;
  stats.per_subset = {{0b011, 0.1}, {0b101, 0.2}, {0b110, 0.3}, {0b111, 0.4}};

  CHECK(cvm::combine_linear(stats) == doctest::Approx(1.0).epsilon(1e-15));
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(cvm::combine_weighted(stats) ==
        doctest::Approx(pi2 * pi2 * 0.6 + pi2 * pi2 * pi2 * 0.4)
            .epsilon(1e-14));

  // Fisher: with 1 - F = e^{-1} for every subset each term contributes 2.
  bool clamped = true;
  const double t = cvm::combine_fisher(
      stats, [](int, double) { return 1.0 - std::exp(-1.0); }, &clamped);
  CHECK(t == doctest::Approx(8.0).epsilon(1e-12));
  CHECK_FALSE(clamped);

  // The p-value floor keeps T finite and reports the clamp.
  const double t2 = cvm::combine_fisher(
      stats, [](int, double) { return 1.0; }, &clamped);
  CHECK(clamped);
  CHECK(std::isfinite(t2));

  CHECK(cvm::fisher_df(3, false) == 8);
  CHECK(cvm::fisher_df(3, true) == 6);
  CHECK(cvm::fisher_df(4, false) == 22);
  CHECK(cvm::fisher_df(4, true) == 12);
}

TEST_CASE("dependogram decision matches the per-subset rule") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unif(0.0, 0.2);
  for (int trial = 0; trial < 50; ++trial) {
    cvm::SubsetStatistics stats;
    stats.n = 20;
    stats.d = 3;
    for (cvm::SubsetMask a : cvm::subsets_of_dimension(3))
      stats.per_subset.emplace_back(a, unif(rng));
    std::map<int, double> crit = {{2, 0.08}, {3, 0.01}};
    auto dep = cvm::combine_dependogram(stats, crit);
    bool any = false;
    double max_ratio = 0.0;
    for (const auto& [a, v] : stats.per_subset) {
      const double q = crit.at(cvm::cardinality(a));
      any = any || v > q;
      max_ratio = std::max(max_ratio, v / q);
    }
    CHECK(dep.statistic == doctest::Approx(max_ratio).epsilon(1e-14));
    CHECK((dep.statistic > 1.0) == any);
    REQUIRE(dep.rows.size() == stats.per_subset.size());
    for (const auto& row : dep.rows)
      CHECK(row.critical ==
            doctest::Approx(crit.at(cvm::cardinality(row.subset))));
  }
}

TEST_CASE("pairwise statistics restrict to pairs") {
  std::mt19937_64 rng(505);
  auto r = random_ranks(12, 4, rng);
  auto pairs = cvm::subset_statistics(r, true);
  auto full = cvm::subset_statistics(r, false);
  CHECK(pairs.per_subset.size() == 6);
  CHECK(full.per_subset.size() == 11);
  for (const auto& [a, v] : pairs.per_subset) {
    CHECK(cvm::cardinality(a) == 2);
    CHECK(v == full.at(a));
  }
}

TEST_CASE("mean of the pair statistic under independence") {
  // E B_{A,n} -> sum of the eigenvalues = (1/6)^2 under the null.
  std::mt19937_64 rng(606);
  const std::size_t n = 60;
  double sum = 0.0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    auto r = random_ranks(n, 2, rng);
    sum += cvm::cvm_subset(r, 0b11);
  }
  CHECK(sum / reps == doctest::Approx(1.0 / 36.0).epsilon(0.12));
}
