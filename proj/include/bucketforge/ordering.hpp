#pragma once

#include <vector>

#include "bucketforge/factor.hpp"

namespace bucketforge {

struct EliminationOrder {
  std::vector<VariableId> order;  // each variable exactly once
};

// Greedy min-fill order on the interaction graph (every factor scope made
// a clique). Ties break toward the smallest variable id, so identical
// inputs always give identical orders.
EliminationOrder minfill_order(const FactorGraph& g);

// Max bucket scope size (counting the eliminated variable itself) of a
// symbolic bucket-elimination pass along o.
int induced_width(const FactorGraph& g, const EliminationOrder& o);

}  // namespace bucketforge
