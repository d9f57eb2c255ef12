#pragma once

#include <cstddef>
#include <vector>

#include "bucketforge/mbr.hpp"

namespace bucketforge {

// Pairwise table between a replicate and its base variable, obtained by
// summing out everything else of the renormalized graph with the
// compensating pair removed. Rows are indexed by the replicate, columns
// by the base variable; the table is rescaled to unit maximum with the
// magnitude kept in log10_scale. Generally not symmetric.
struct SkewedMarginal {
  VariableId base = -1;
  ReplicateId replicate;
  VariableId replicate_var = -1;
  Matrix g;
  double log10_scale = 0.0;
};

// Renormalized graph with the currently installed compensation set, plus
// the location of each pair so updates can swap values in place.
struct GbrState {
  FactorGraph working_graph;
  EliminationOrder renorm_order;

  struct PairSlot {
    ReplicateId replicate;
    VariableId base = -1;
    VariableId replicate_var = -1;
    std::size_t base_singleton = 0;
    std::size_t replicate_singleton = 0;
  };
  std::vector<PairSlot> slots;        // one per trace step
  std::vector<std::size_t> pending;   // step indices, reverse renorm order
};

GbrState make_gbr_state(const RenormalizationTrace& trace);

SkewedMarginal compute_skewed_marginal(const GbrState& state,
                                       std::size_t step,
                                       int width_cap = kDefaultWidthCap);

struct GbrUpdateReport {
  double old_residual = 0.0;  // ||g - r r^T g||_F with the replaced pair
  double new_residual = 0.0;  // ||g - s s^T g||_F with the refitted pair
  double sigma = 0.0;
};

// Refit one compensating pair against its skewed marginal and install the
// new values in the working graph.
GbrUpdateReport gbr_update(GbrState& state, std::size_t step,
                           int width_cap = kDefaultWidthCap);

// Full pipeline: mini-bucket renormalization, then one reverse-order
// refit sweep over every replicate (optionally more), then exact
// elimination of the reworked graph.
LogPartition gbr_partition_function(const FactorGraph& g,
                                    const EliminationOrder& o, int ibound,
                                    int sweeps = 1,
                                    int width_cap = kDefaultWidthCap);

}  // namespace bucketforge
