#include <doctest.h>

#include <cmath>
#include <vector>

#include "bucketforge/lowrank.hpp"
#include "bucketforge/rng.hpp"
#include "test_support.hpp"

using namespace bucketforge;
using namespace testsupport;

namespace {

Matrix random_nonneg(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.uniform();
  return m;
}

}  // namespace

TEST_CASE("single dominant row") {
  Matrix m(2, 2, {2, 0, 0, 0});
  Rank1Result res = rank1_truncate(m);
  CHECK(res.converged);
  CHECK(res.r[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.r[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.sigma == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("rank-1 input reconstructs exactly") {
  std::vector<double> u{0.3, 1.2, 0.7};
  std::vector<double> v{0.9, 0.1, 0.5, 1.4};
  Matrix m(3, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = u[i] * v[j];
  Rank1Result res = rank1_truncate(m);
  CHECK(rank1_residual(m, res.r) <= 1e-10 * frobenius_norm(m));
}

TEST_CASE("all-zero input takes the degenerate convention") {
  Matrix m(3, 5);
  Rank1Result res = rank1_truncate(m);
  CHECK(res.converged);
  CHECK(res.sigma == 0.0);
  CHECK(res.r == std::vector<double>{1, 0, 0});
}

TEST_CASE("matches the dense SVD oracle on seeded matrices") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Matrix m = random_nonneg(3, 8, seed + 41);
    Rank1Result res = rank1_truncate(m);
    auto oracle = svd_oracle_left(m);
    CHECK(cosine_distance(res.r, oracle) <= 1e-8);
    CHECK(res.sigma == doctest::Approx(svd_oracle_sigma(m)).epsilon(1e-8));
  }
}

TEST_CASE("projection beats random unit vectors on small grids") {
  // every 2x2 and 2x4 matrix with entries from {0, 0.5, 1}
  auto check_matrix = [&](const Matrix& m, Xoshiro256pp& rng) {
    Rank1Result res = rank1_truncate(m);
    // ||M - q q^T M||^2 = ||M||^2 - ||q^T M||^2, so compare projections
    auto projection_sq = [&](const std::vector<double>& q) {
      double total = 0.0;
      for (std::size_t c = 0; c < m.cols; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) s += q[r] * m.at(r, c);
        total += s * s;
      }
      return total;
    };
    const double best = projection_sq(res.r);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> q(m.rows);
      double norm = 0.0;
      for (double& x : q) {
        x = rng.uniform(-1.0, 1.0);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (double& x : q) x /= norm;
      CHECK(best >= projection_sq(q) - 1e-9);
    }
  };

  Xoshiro256pp rng(7);
  const double levels[3] = {0.0, 0.5, 1.0};
  for (int code = 0; code < 81; ++code) {
    Matrix m(2, 2);
    int c = code;
    for (double& v : m.data) {
      v = levels[c % 3];
      c /= 3;
    }
    check_matrix(m, rng);
  }
  for (int code = 0; code < 6561; code += 13) {  // coarse sweep of 2x4
    Matrix m(2, 4);
    int c = code;
    for (double& v : m.data) {
      v = levels[c % 3];
      c /= 3;
    }
    check_matrix(m, rng);
  }
}

TEST_CASE("scale equivariance") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix m = random_nonneg(4, 6, seed + 3);
    Rank1Result base = rank1_truncate(m);
    for (double c : {1e-8, 0.5, 3.0, 1e9}) {
      Matrix scaled = m;
      for (double& v : scaled.data) v *= c;
      Rank1Result res = rank1_truncate(scaled);
      for (std::size_t k = 0; k < base.r.size(); ++k)
        CHECK(res.r[k] == doctest::Approx(base.r[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("output stays non-negative on non-negative input") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Matrix m = random_nonneg(2 + seed % 4, 3 + seed % 9, seed);
    Rank1Result res = rank1_truncate(m);
    for (double x : res.r) CHECK(x >= -1e-12);
    double norm = 0.0;
    for (double x : res.r) norm += x * x;
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
