#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "cvm/dataset.hpp"
#include "cvm/ranks.hpp"

namespace {

std::string write_temp(const std::string& content) {
  static int counter = 0;
  std::string path = "cvm_test_input_" + std::to_string(counter++) + ".txt";
  std::ofstream out(path);
  out << content;
  return path;
}

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

}  // namespace

TEST_CASE("dataset parsing") {
  auto p1 = write_temp("1.0,2.0\n3.0,1.0\n2.0,3.0\n");
  auto d1 = cvm::load_dataset(p1);
  CHECK(d1.n == 3);
  CHECK(d1.d == 2);
  CHECK(d1(1, 0) == 3.0);
  std::remove(p1.c_str());

  auto p2 = write_temp("x,y,z\n1 2 3\n4 5 6\n7 8 9\n1 1 1\n0 2 4\n");
  auto d2 = cvm::load_dataset(p2);
  CHECK(d2.n == 5);
  CHECK(d2.d == 3);
  REQUIRE(d2.names.size() == 3);
  CHECK(d2.names[1] == "y");
  std::remove(p2.c_str());

  auto p3 = write_temp("1 2 3\n4 5\n6 7 8\n");
  CHECK_THROWS_WITH_AS(cvm::load_dataset(p3), doctest::Contains(":2:"),
                       std::runtime_error);
  std::remove(p3.c_str());

  auto p4 = write_temp("1 2\n3 abc\n");
  CHECK_THROWS(cvm::load_dataset(p4));
  std::remove(p4.c_str());

  auto p5 = write_temp("1 2\n");
  CHECK_THROWS(cvm::load_dataset(p5));  // n < 2
  std::remove(p5.c_str());
}

TEST_CASE("rank computation") {
  auto data = cvm::make_dataset(3, 2, {3.2, 1.0, 1.1, 2.0, 2.5, 3.0});
  auto r = cvm::compute_ranks(data);
  CHECK(r(0, 0) == 3);
  CHECK(r(1, 0) == 1);
  CHECK(r(2, 0) == 2);
  CHECK(r(0, 1) == 1);
  CHECK(r(2, 1) == 3);
  CHECK_FALSE(r.has_ties());
}

TEST_CASE("rank columns are permutations") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 30, d = 2 + rng() % 4;
    std::vector<double> v(n * d);
    for (auto& x : v) x = unif(rng);
    auto r = cvm::compute_ranks(cvm::make_dataset(n, d, v));
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        const int rank = r(i, j);
        REQUIRE(rank >= 1);
        REQUIRE(rank <= static_cast<int>(n));
        CHECK_FALSE(seen[rank - 1]);
        seen[rank - 1] = true;
      }
    }
  }
}

TEST_CASE("ties broken reproducibly under a fixed seed") {
  auto data = cvm::make_dataset(2, 2, {5.0, 1.0, 5.0, 2.0});
  auto r1 = cvm::compute_ranks(data, 42);
  auto r2 = cvm::compute_ranks(data, 42);
  CHECK(r1.ranks == r2.ranks);
  CHECK(r1.ties_broken[0] == 1);
  CHECK(r1.ties_broken[1] == 0);
  CHECK(r1(0, 0) + r1(1, 0) == 3);  // ranks {1,2} in some order
  CHECK(r1.has_ties());
}

TEST_CASE("empirical copula") {
  cvm::RankMatrix r;
  r.n = 2;
  r.d = 2;
  r.ranks = {1, 1, 2, 2};

  const double ones[] = {1.0, 1.0};
  CHECK(cvm::empirical_copula(r, ones) == doctest::Approx(1.0));

  const double low[] = {0.3, 1.0};  // 0.3 < 1/2
  CHECK(cvm::empirical_copula(r, low) == doctest::Approx(0.0));

  const double half[] = {0.5, 0.5};
  CHECK(cvm::empirical_copula(r, half) == doctest::Approx(0.5));

  const double bad[] = {1.5, 0.5};
  CHECK_THROWS(cvm::empirical_copula(r, bad));
}

TEST_CASE("empirical copula marginals and monotonicity") {
  std::mt19937_64 rng(11);
  auto r = random_ranks(7, 3, rng);
  for (int i = 1; i <= 7; ++i) {
    const int idx[] = {i, 7, 7};
    CHECK(cvm::empirical_copula_grid(r, idx) ==
          doctest::Approx(i / 7.0).epsilon(1e-15));
  }
  double prev = -1.0;
  for (int i = 0; i <= 7; ++i) {
    const int idx[] = {i, 5, 6};
    const double v = cvm::empirical_copula_grid(r, idx);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("mobius subset process") {
  cvm::RankMatrix r;
  r.n = 2;
  r.d = 2;
  r.ranks = {1, 1, 2, 2};

  const double u[] = {0.5, 0.5};
  CHECK(cvm::mobius_process(r, 0b11, u) ==
        doctest::Approx(0.5 / std::sqrt(2.0)));

  const double boundary[] = {0.37, 1.0};
  CHECK(cvm::mobius_process(r, 0b11, boundary) == doctest::Approx(0.0));

  CHECK_THROWS(cvm::mobius_process(r, 0b01, u));  // |A| < 2
}

TEST_CASE("mobius process invariant under row permutation") {
  std::mt19937_64 rng(3);
  auto r = random_ranks(6, 3, rng);
  cvm::RankMatrix shuffled = r;
  std::vector<std::size_t> order = {3, 0, 5, 1, 4, 2};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      shuffled.ranks[i * 3 + j] = r(order[i], j);
  const double u[] = {0.31, 0.77, 0.52};
  for (cvm::SubsetMask a : cvm::subsets_of_dimension(3))
    CHECK(cvm::mobius_process(r, a, u) ==
          doctest::Approx(cvm::mobius_process(shuffled, a, u)));
}

TEST_CASE("mobius reconstruction exact at grid points (integer oracle)") {
  // n^d * sqrt(n) * {C_n(u) - prod u_j} = sum_{|A|>1} Y_A Z_A at grid points
  // u_j = i_j / n, where Y_A = sum_i prod_{j in A} (n 1(R_ij <= i_j) - i_j)
  // and Z_A = prod_{j not in A} i_j. Both sides are exact 64-bit integers.
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng() % 7, d = 2 + rng() % 3;
    auto r = random_ranks(n, d, rng);
    std::vector<int> idx(d, 0);
    for (;;) {
      std::int64_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        bool all = true;
        for (std::size_t j = 0; j < d; ++j)
          if (r(i, j) > idx[j]) all = false;
        if (all) ++count;
      }
      std::int64_t prod_idx = 1;
      for (std::size_t j = 0; j < d; ++j) prod_idx *= idx[j];
      std::int64_t lhs = 1;
      for (std::size_t j = 0; j + 1 < d; ++j) lhs *= n;
      lhs = lhs * n * count - n * prod_idx;  // n^d count - n prod i_j

      std::int64_t rhs = 0;
      for (cvm::SubsetMask a :
           cvm::subsets_of_dimension(static_cast<int>(d))) {
        std::int64_t y = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::int64_t p = 1;
          for (int j : cvm::members(a)) {
            const int ind = r(i, j - 1) <= idx[j - 1] ? 1 : 0;
            p *= static_cast<std::int64_t>(n) * ind - idx[j - 1];
          }
          y += p;
        }
        std::int64_t z = 1;
        for (std::size_t j = 0; j < d; ++j)
          if ((a & (1u << j)) == 0) z *= idx[j];
        rhs += y * z;
      }
      REQUIRE(lhs == rhs);

      std::size_t j = 0;
      for (; j < d; ++j) {
        if (++idx[j] <= static_cast<int>(n)) break;
        idx[j] = 0;
      }
      if (j == d) break;
    }
  }
}
