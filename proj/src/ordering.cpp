#include "bucketforge/ordering.hpp"

#include <algorithm>
#include <set>

#include "bucketforge/errors.hpp"

namespace bucketforge {

namespace {

std::vector<std::set<VariableId>> interaction_graph(const FactorGraph& g) {
  std::vector<std::set<VariableId>> adj(g.num_variables());
  for (const Factor& f : g.factors)
    for (std::size_t a = 0; a < f.scope.size(); ++a)
      for (std::size_t b = a + 1; b < f.scope.size(); ++b) {
        adj[f.scope[a]].insert(f.scope[b]);
        adj[f.scope[b]].insert(f.scope[a]);
      }
  return adj;
}

// Edges among v's uneliminated neighbors that elimination of v would add.
long fill_count(const std::vector<std::set<VariableId>>& adj, VariableId v) {
  long fills = 0;
  const auto& nb = adj[v];
  for (auto a = nb.begin(); a != nb.end(); ++a) {
    auto b = a;
    for (++b; b != nb.end(); ++b)
      if (!adj[*a].count(*b)) ++fills;
  }
  return fills;
}

}  // namespace

EliminationOrder minfill_order(const FactorGraph& g) {
  g.validate();
  auto adj = interaction_graph(g);
  const std::size_t n = g.num_variables();
  std::vector<bool> eliminated(n, false);

  EliminationOrder out;
  out.order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    VariableId best = -1;
    long best_fill = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      long fills = fill_count(adj, static_cast<VariableId>(v));
      if (best < 0 || fills < best_fill) {
        best = static_cast<VariableId>(v);
        best_fill = fills;
      }
    }
    // connect remaining neighbors, then remove best
    const auto nb = adj[best];
    for (auto a = nb.begin(); a != nb.end(); ++a) {
      adj[*a].erase(best);
      auto b = a;
      for (++b; b != nb.end(); ++b) {
        adj[*a].insert(*b);
        adj[*b].insert(*a);
      }
    }
    adj[best].clear();
    eliminated[best] = true;
    out.order.push_back(best);
  }
  return out;
}

int induced_width(const FactorGraph& g, const EliminationOrder& o) {
  g.validate();
  if (o.order.size() != g.num_variables())
    throw ModelError("elimination order must cover every variable");
  std::vector<bool> seen(g.num_variables(), false);
  for (VariableId v : o.order) {
    if (v < 0 || static_cast<std::size_t>(v) >= seen.size() || seen[v])
      throw ModelError("elimination order is not a permutation");
    seen[v] = true;
  }

  std::vector<std::vector<VariableId>> scopes;
  scopes.reserve(g.factors.size());
  for (const Factor& f : g.factors)
    if (!f.scope.empty()) scopes.push_back(f.scope);

  int width = 0;
  for (VariableId i : o.order) {
    std::vector<VariableId> bucket_scope{i};
    std::vector<std::vector<VariableId>> rest;
    rest.reserve(scopes.size());
    for (auto& s : scopes) {
      if (std::binary_search(s.begin(), s.end(), i)) {
        std::vector<VariableId> merged;
        std::set_union(bucket_scope.begin(), bucket_scope.end(), s.begin(),
                       s.end(), std::back_inserter(merged));
        bucket_scope = std::move(merged);
      } else {
        rest.push_back(std::move(s));
      }
    }
    width = std::max(width, static_cast<int>(bucket_scope.size()));
    bucket_scope.erase(
        std::find(bucket_scope.begin(), bucket_scope.end(), i));
    if (!bucket_scope.empty()) rest.push_back(std::move(bucket_scope));
    scopes = std::move(rest);
  }
  return width;
}

}  // namespace bucketforge
