#include "bucketforge/gbr.hpp"

#include <algorithm>
#include <cmath>

#include "bucketforge/errors.hpp"

namespace bucketforge {

GbrState make_gbr_state(const RenormalizationTrace& trace) {
  GbrState state;
  state.working_graph = trace.final_graph;
  state.renorm_order = trace.renorm_order;
  state.slots.reserve(trace.steps.size());
  for (const TraceStep& step : trace.steps)
    state.slots.push_back({step.replicate, step.replicate.base,
                           step.replicate_var, step.base_singleton,
                           step.replicate_singleton});
  // steps were created along the renormalized order, so reverse order is
  // simply last step first
  for (std::size_t t = trace.steps.size(); t-- > 0;)
    state.pending.push_back(t);
  return state;
}

SkewedMarginal compute_skewed_marginal(const GbrState& state,
                                       std::size_t step, int width_cap) {
  const auto& slot = state.slots.at(step);

  FactorGraph stripped;
  stripped.domains = state.working_graph.domains;
  stripped.factors.reserve(state.working_graph.factors.size());
  for (std::size_t k = 0; k < state.working_graph.factors.size(); ++k)
    if (k != slot.base_singleton && k != slot.replicate_singleton)
      stripped.factors.push_back(state.working_graph.factors[k]);

  std::vector<VariableId> keep{slot.base, slot.replicate_var};
  std::sort(keep.begin(), keep.end());
  EliminationOrder rest;
  rest.order.reserve(state.renorm_order.order.size() - 2);
  for (VariableId v : state.renorm_order.order)
    if (v != slot.base && v != slot.replicate_var) rest.order.push_back(v);

  Factor f = marginalize_subset(stripped, keep, rest, width_cap);

  const std::size_t d =
      static_cast<std::size_t>(stripped.domains.cardinality(slot.base));
  SkewedMarginal out;
  out.base = slot.base;
  out.replicate = slot.replicate;
  out.replicate_var = slot.replicate_var;
  out.g = Matrix(d, d);

  // f depends on at most {base, replicate}; fill cell (x_rep, x_base)
  const auto strides = scope_strides(f.scope, stripped.domains);
  auto var_stride = [&](VariableId v) -> std::size_t {
    auto it = std::lower_bound(f.scope.begin(), f.scope.end(), v);
    if (it == f.scope.end() || *it != v) return 0;
    return strides[static_cast<std::size_t>(it - f.scope.begin())];
  };
  const std::size_t stride_base = var_stride(slot.base);
  const std::size_t stride_rep = var_stride(slot.replicate_var);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      out.g.at(a, b) = f.table[a * stride_rep + b * stride_base];

  double mx = 0.0;
  for (double v : out.g.data) mx = std::max(mx, v);
  out.log10_scale = f.log_scale;
  if (mx > 0.0 && mx != 1.0) {
    for (double& v : out.g.data) v /= mx;
    out.log10_scale += std::log10(mx);
  }
  return out;
}

GbrUpdateReport gbr_update(GbrState& state, std::size_t step, int width_cap) {
  const auto& slot = state.slots.at(step);
  SkewedMarginal marginal = compute_skewed_marginal(state, step, width_cap);
  Rank1Result rank1 = rank1_truncate(marginal.g);

  GbrUpdateReport report;
  report.sigma = rank1.sigma;
  report.old_residual = rank1_residual(
      marginal.g, state.working_graph.factors[slot.base_singleton].table);
  report.new_residual = rank1_residual(marginal.g, rank1.r);

  state.working_graph.factors[slot.base_singleton] =
      Factor({slot.base}, std::vector<double>(rank1.r));
  state.working_graph.factors[slot.replicate_singleton] =
      Factor({slot.replicate_var}, std::vector<double>(rank1.r));

  auto it = std::find(state.pending.begin(), state.pending.end(), step);
  if (it != state.pending.end()) state.pending.erase(it);
  return report;
}

LogPartition gbr_partition_function(const FactorGraph& g,
                                    const EliminationOrder& o, int ibound,
                                    int sweeps, int width_cap) {
  if (sweeps < 1) throw ConfigError("sweeps must be >= 1");
  MbrResult mbr = mbr_partition_function(g, o, ibound);
  GbrState state = make_gbr_state(mbr.trace);
  for (int sweep = 0; sweep < sweeps; ++sweep)
    for (std::size_t t = state.slots.size(); t-- > 0;)
      gbr_update(state, t, width_cap);
  return bucket_elimination(state.working_graph, state.renorm_order,
                            width_cap);
}

}  // namespace bucketforge
