#pragma once

// Shared helpers for the test suites: an independent dense SVD oracle
// (Eigen), brute-force enumeration utilities, and small model builders.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bucketforge/factor.hpp"
#include "bucketforge/ising.hpp"
#include "bucketforge/lowrank.hpp"
#include "bucketforge/rng.hpp"

namespace testsupport {

using namespace bucketforge;

// Leading left singular vector via a full dense SVD, oriented
// non-negative. Independent of the power-iteration path under test.
inline std::vector<double> svd_oracle_left(const Matrix& m) {
  Eigen::MatrixXd em(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) em(r, c) = m.at(r, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(em, Eigen::ComputeFullU);
  Eigen::VectorXd u = svd.matrixU().col(0);
  double max_abs = 0.0;
  int arg = 0;
  for (int i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > max_abs) {
      max_abs = std::abs(u[i]);
      arg = i;
    }
  if (u[arg] < 0) u = -u;
  return std::vector<double>(u.data(), u.data() + u.size());
}

inline double svd_oracle_sigma(const Matrix& m) {
  Eigen::MatrixXd em(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) em(r, c) = m.at(r, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(em);
  return svd.singularValues()(0);
}

inline double cosine_distance(const std::vector<double>& a,
                              const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return 1.0 - std::abs(dot) / std::sqrt(na * nb);
}

// Value of a factor at a full assignment (log_scale applied).
inline double factor_value_at(const Factor& f, const DomainSpec& domains,
                              const std::vector<std::int32_t>& assignment) {
  const auto strides = scope_strides(f.scope, domains);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < f.scope.size(); ++k)
    idx += strides[k] * static_cast<std::size_t>(assignment[f.scope[k]]);
  return f.table[idx] * std::pow(10.0, f.log_scale);
}

// All assignments of a domain, odometer order.
inline bool next_assignment(std::vector<std::int32_t>& a,
                            const DomainSpec& domains) {
  std::size_t v = a.size();
  while (v-- > 0) {
    if (++a[v] < domains.cardinality(static_cast<VariableId>(v))) return true;
    a[v] = 0;
  }
  return false;
}

// log10 of Z by plain enumeration in linear space; only for tiny models.
inline double enumerate_log10z(const FactorGraph& g) {
  std::vector<std::int32_t> a(g.num_variables(), 0);
  double z = 0.0;
  do {
    double p = 1.0;
    for (const Factor& f : g.factors) p *= factor_value_at(f, g.domains, a);
    z += p;
  } while (next_assignment(a, g.domains));
  return std::log10(z);
}

// Random connected pairwise model over n binary variables: a spanning
// ring plus extra random edges, random singleton fields.
inline FactorGraph random_pairwise_model(int n, int extra_edges,
                                         std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  FactorGraph g;
  g.domains.cardinalities.assign(n, 2);
  auto add_pair = [&](VariableId i, VariableId j) {
    std::vector<double> t(4);
    for (double& x : t) x = rng.uniform(0.05, 1.0);
    g.factors.emplace_back(std::vector<VariableId>{i, j}, std::move(t));
  };
  for (int v = 0; v < n; ++v) {
    std::vector<double> t{rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
    g.factors.emplace_back(std::vector<VariableId>{v}, std::move(t));
  }
  if (n > 1)
    for (int v = 0; v < n; ++v) add_pair(std::min(v, (v + 1) % n),
                                         std::max(v, (v + 1) % n));
  for (int e = 0; e < extra_edges; ++e) {
    int i = static_cast<int>(rng.next() % n);
    int j = static_cast<int>(rng.next() % n);
    if (i == j) continue;
    add_pair(std::min(i, j), std::max(i, j));
  }
  return g;
}

// Mixed small topologies used by the exactness and trace suites.
inline FactorGraph mixed_small_model(int which, std::uint64_t seed) {
  switch (which % 5) {
    case 0: return gen_ising(IsingSpec::grid(3, 3, 1.0, seed));
    case 1: return gen_ising(IsingSpec::grid(3, 4, 1.5, seed));
    case 2: return gen_ising(IsingSpec::complete(7, 1.0, seed));
    case 3: return gen_ising(IsingSpec::complete(9, 0.5, seed));
    default: return random_pairwise_model(11, 6, seed);
  }
}

}  // namespace testsupport
