#pragma once

#include <span>
#include <vector>

#include "bucketforge/factor.hpp"
#include "bucketforge/ordering.hpp"

namespace bucketforge {

inline constexpr int kDefaultWidthCap = 25;

struct LogPartition {
  double log10_z = 0.0;  // -inf for zero-mass models
};

struct Bucket {
  VariableId variable;
  std::vector<Factor> members;  // every member's scope contains variable
};

struct MiniBucketPartition {
  VariableId variable;
  std::vector<std::vector<Factor>> groups;
  int ibound = 0;
};

enum class BoundMode { Upper, Lower };

// Exact log10 Z along o. Refuses models whose induced width exceeds
// width_cap instead of exhausting memory.
LogPartition bucket_elimination(const FactorGraph& g,
                                const EliminationOrder& o,
                                int width_cap = kDefaultWidthCap);

// Sum out every variable in o_rest and return the resulting factor over
// a subset of keep. keep and o_rest must partition the variable set.
Factor marginalize_subset(const FactorGraph& g,
                          const std::vector<VariableId>& keep,
                          const EliminationOrder& o_rest,
                          int width_cap = kDefaultWidthCap);

// Greedy first-fit-decreasing split of a bucket into groups whose combined
// scope (with the bucket variable) stays within ibound+1 variables.
// Members are processed in descending scope size, ties toward the smaller
// scope; each lands in the first group that still fits.
std::vector<std::vector<std::size_t>> partition_bucket_indices(
    VariableId variable, std::span<const Factor> members, int ibound,
    const DomainSpec& domains);

MiniBucketPartition partition_bucket(const Bucket& b, int ibound,
                                     const DomainSpec& domains);

// Mini-bucket bound on log10 Z: all groups of a bucket except the last are
// eliminated with max (upper) or min (lower), the last with sum.
LogPartition mini_bucket_elimination(const FactorGraph& g,
                                     const EliminationOrder& o, int ibound,
                                     BoundMode mode);

}  // namespace bucketforge
