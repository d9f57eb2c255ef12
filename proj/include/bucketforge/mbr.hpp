#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bucketforge/elimination.hpp"
#include "bucketforge/factor.hpp"
#include "bucketforge/ordering.hpp"

namespace bucketforge {

// Replicate l of a bucket variable, 1-based: splitting bucket i into m_i
// groups creates replicates i^1 .. i^(m_i - 1).
struct ReplicateId {
  VariableId base = -1;
  int index = 0;
};

// The two compensating singletons introduced by one renormalization share
// a single value vector; storing it once makes that a structural fact.
struct CompensationPair {
  VariableId bucket_variable = -1;
  int replicate_index = 0;
  std::vector<double> values;  // unit norm, entrywise >= 0
};

// Bookkeeping for a factor produced during renormalized elimination:
// which vertices it summarizes and which factors of the final graph it
// is a partial sum of. The edge set is the scopes of those factors.
struct ScopeRecord {
  std::vector<VariableId> vertices;            // sorted
  std::vector<std::size_t> graph_factors;      // indices into final graph
};

struct TraceStep {
  ReplicateId replicate;
  VariableId replicate_var = -1;  // allocated variable id of the replicate
  CompensationPair compensation;
  std::size_t base_singleton = 0;       // final-graph index of the factor on x_i
  std::size_t replicate_singleton = 0;  // final-graph index of the factor on the replicate
  ScopeRecord renormalized_group;       // group record after relabeling
  ScopeRecord new_factor;               // record of the factor summed over the replicate
};

// Full renormalization history: the final graph, the extended elimination
// order over replicates and originals, one step per replicate, and the
// scope records of every factor created along the way.
struct RenormalizationTrace {
  FactorGraph final_graph;
  EliminationOrder base_order;
  EliminationOrder renorm_order;
  std::vector<TraceStep> steps;             // length T
  std::vector<int> group_counts;            // m_i per position of base_order
  std::vector<ScopeRecord> factor_records;  // originals, then derived factors
};

struct MbrResult {
  LogPartition log_z;
  RenormalizationTrace trace;
};

// Renormalize one mini-bucket: project the group product onto its leading
// singular direction in the bucket variable, relabel the members onto a
// fresh replicate and attach the compensating singletons. The returned
// group is the relabeled members followed by the replicate-side singleton
// and the base-side singleton. domains must already contain replicate_var.
std::pair<std::vector<Factor>, CompensationPair> compensate_minibucket(
    std::span<const Factor> group, VariableId i, VariableId replicate_var,
    int replicate_index, const DomainSpec& domains);

// Mini-bucket renormalization estimate of log10 Z along o, together with
// the trace of graph renormalizations that reproduces it exactly.
MbrResult mbr_partition_function(const FactorGraph& g,
                                 const EliminationOrder& o, int ibound);

// Exact partition function of the trace's final graph along the extended
// order; must reproduce the estimate the trace came from.
LogPartition verify_trace(const RenormalizationTrace& trace,
                          int width_cap = kDefaultWidthCap);

}  // namespace bucketforge
