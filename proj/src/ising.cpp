#include "bucketforge/ising.hpp"

#include <cmath>
#include <utility>

#include "bucketforge/errors.hpp"
#include "bucketforge/rng.hpp"

namespace bucketforge {

IsingSpec IsingSpec::grid(int rows, int cols, double delta,
                          std::uint64_t seed, double field_range) {
  IsingSpec s;
  s.topology = Topology::Grid;
  s.rows = rows;
  s.cols = cols;
  s.delta = delta;
  s.seed = seed;
  s.field_range = field_range;
  return s;
}

IsingSpec IsingSpec::complete(int n, double delta, std::uint64_t seed,
                              double field_range) {
  IsingSpec s;
  s.topology = Topology::Complete;
  s.n = n;
  s.delta = delta;
  s.seed = seed;
  s.field_range = field_range;
  return s;
}

void IsingSpec::validate() const {
  if (topology == Topology::Grid) {
    if (rows < 1 || cols < 1) throw ConfigError("grid dimensions must be >= 1");
  } else {
    if (n < 1) throw ConfigError("complete-graph size must be >= 1");
  }
  if (delta < 0.0) throw ConfigError("delta must be >= 0");
  if (field_range < 0.0) throw ConfigError("field range must be >= 0");
}

FactorGraph gen_ising(const IsingSpec& spec) {
  spec.validate();
  const int n = spec.topology == IsingSpec::Topology::Grid
                    ? spec.rows * spec.cols
                    : spec.n;

  std::vector<std::pair<VariableId, VariableId>> edges;
  if (spec.topology == IsingSpec::Topology::Grid) {
    const int w = spec.cols;
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < w; ++c) {
        const VariableId v = r * w + c;
        if (c + 1 < w) edges.emplace_back(v, v + 1);
        if (r + 1 < spec.rows) edges.emplace_back(v, v + w);
      }
    // (v, v+1) precedes (v, v+w) above, so the list is already
    // lexicographic except for single-column grids, where only the
    // vertical edge exists.
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }

  FactorGraph g;
  g.domains.cardinalities.assign(n, 2);
  g.factors.reserve(static_cast<std::size_t>(n) + edges.size());

  Xoshiro256pp rng(spec.seed);
  for (int v = 0; v < n; ++v) {
    const double phi = rng.uniform(-spec.field_range, spec.field_range);
    g.factors.emplace_back(std::vector<VariableId>{v},
                           std::vector<double>{std::exp(-phi), std::exp(phi)});
  }
  for (const auto& [i, j] : edges) {
    const double phi = rng.uniform(-spec.delta, spec.delta);
    const double same = std::exp(phi);
    const double diff = std::exp(-phi);
    g.factors.emplace_back(std::vector<VariableId>{i, j},
                           std::vector<double>{same, diff, diff, same});
  }
  return g;
}

}  // namespace bucketforge
