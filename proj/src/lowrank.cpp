#include "bucketforge/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bucketforge/errors.hpp"

namespace bucketforge {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> d)
    : rows(r), cols(c), data(std::move(d)) {
  if (data.size() != rows * cols)
    throw ModelError("matrix data length does not match rows*cols");
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data) s += v * v;
  return std::sqrt(s);
}

double rank1_residual(const Matrix& m, const std::vector<double>& r) {
  if (r.size() != m.rows)
    throw ModelError("rank1_residual: vector length does not match rows");
  // row_mix(c) = sum_k r(k) m(k,c); residual row i = m(i,:) - r(i)*row_mix
  std::vector<double> row_mix(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t c = 0; c < m.cols; ++c)
      row_mix[c] += r[i] * m.at(i, c);
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t c = 0; c < m.cols; ++c) {
      double d = m.at(i, c) - r[i] * row_mix[c];
      s += d * d;
    }
  return std::sqrt(s);
}

namespace {

constexpr double kAngleTol = 1e-12;
constexpr int kMaxIterations = 10000;

}  // namespace

Rank1Result rank1_truncate(const Matrix& m) {
  for (double v : m.data)
    if (!std::isfinite(v))
      throw ModelError("rank1_truncate: non-finite matrix entry");

  const std::size_t d = m.rows;
  Rank1Result out;
  out.r.assign(d, 0.0);

  bool all_zero = true;
  for (double v : m.data)
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero || d == 0) {
    if (d > 0) out.r[0] = 1.0;
    out.sigma = 0.0;
    out.converged = true;
    return out;
  }

  // Gram matrix G = m m^T, d x d. The matrices here are short and wide,
  // so forming G costs one pass and the iteration itself is tiny.
  std::vector<double> gram(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < m.cols; ++c) s += m.at(i, c) * m.at(j, c);
      gram[i * d + j] = s;
      gram[j * d + i] = s;
    }

  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> w(d, 0.0);
  double lambda = 0.0;
  for (out.iterations = 0; out.iterations < kMaxIterations; ++out.iterations) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += gram[i * d + j] * v[j];
      w[i] = s;
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;  // v fell in the kernel; keep current v
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      w[i] /= norm;
      dot += w[i] * v[i];
    }
    v = w;
    lambda = norm;
    if (1.0 - std::abs(dot) <= kAngleTol) {
      out.converged = true;
      ++out.iterations;
      break;
    }
  }

  // Orient so the largest-magnitude entry is positive, then clamp the
  // tiny negative round-off the iteration can leave behind.
  std::size_t imax = 0;
  for (std::size_t i = 1; i < d; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
  for (double& x : v)
    if (x < 0.0 && x > -1e-12) x = 0.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& x : v) x /= norm;

  out.r = std::move(v);
  out.sigma = std::sqrt(std::max(0.0, lambda));
  return out;
}

}  // namespace bucketforge
