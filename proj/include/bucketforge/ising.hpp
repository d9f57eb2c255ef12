#pragma once

#include <cstdint>

#include "bucketforge/factor.hpp"

namespace bucketforge {

// Seeded random spin-glass generator. Spins are encoded as index 0 = -1,
// index 1 = +1. Singleton factors are exp(phi_i * x_i) with
// phi_i ~ U[-field_range, field_range]; pairwise factors are
// exp(phi_ij * x_i * x_j) with phi_ij ~ U[-delta, delta]. Draw order is
// fixed: fields in variable order first, then edges in lexicographic
// order, so a spec is reproducible bit for bit.
struct IsingSpec {
  enum class Topology { Grid, Complete };

  Topology topology = Topology::Grid;
  int rows = 1;
  int cols = 1;  // grid dimensions
  int n = 1;     // complete-graph size
  double delta = 1.0;
  double field_range = 0.1;
  std::uint64_t seed = 0;

  static IsingSpec grid(int rows, int cols, double delta, std::uint64_t seed,
                        double field_range = 0.1);
  static IsingSpec complete(int n, double delta, std::uint64_t seed,
                            double field_range = 0.1);
  void validate() const;
};

FactorGraph gen_ising(const IsingSpec& spec);

}  // namespace bucketforge
