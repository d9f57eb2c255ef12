#pragma once

#include <cstddef>
#include <vector>

namespace bucketforge {

// Dense row-major matrix of non-negative reals.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> d);

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Rank1Result {
  std::vector<double> r;  // leading left singular vector, unit norm, entrywise >= 0
  double sigma = 0.0;     // leading singular value
  int iterations = 0;
  bool converged = false;
};

// Leading left singular direction of a non-negative matrix, by power
// iteration on the rows x rows Gram matrix m * m^T. Deterministic all-ones
// start, stops when the angle between successive iterates drops below 1e-12
// or after 10000 iterations. An all-zero input yields r = e1, sigma = 0.
Rank1Result rank1_truncate(const Matrix& m);

// || m - r r^T m ||_F for a unit vector r of length m.rows.
double rank1_residual(const Matrix& m, const std::vector<double>& r);

double frobenius_norm(const Matrix& m);

}  // namespace bucketforge
