#include "bucketforge/mbr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bucketforge/errors.hpp"
#include "bucketforge/lowrank.hpp"

namespace bucketforge {

namespace {

std::vector<VariableId> sorted_union(std::span<const VariableId> a,
                                     std::span<const VariableId> b) {
  std::vector<VariableId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

// A live factor of the renormalized elimination together with its record.
struct WorkingFactor {
  Factor f;
  ScopeRecord rec;
};

}  // namespace

std::pair<std::vector<Factor>, CompensationPair> compensate_minibucket(
    std::span<const Factor> group, VariableId i, VariableId replicate_var,
    int replicate_index, const DomainSpec& domains) {
  if (group.empty()) throw ModelError("cannot compensate an empty group");
  for (const Factor& f : group)
    if (!f.contains(i))
      throw ModelError("group member does not contain the bucket variable");

  Factor prod = factor_product(group, domains);
  Matrix m = factor_matricize(prod, i, domains);
  Rank1Result rank1 = rank1_truncate(m);

  CompensationPair pair;
  pair.bucket_variable = i;
  pair.replicate_index = replicate_index;
  pair.values = rank1.r;

  std::vector<Factor> renormalized;
  renormalized.reserve(group.size() + 2);
  for (const Factor& f : group)
    renormalized.push_back(rename_variable(f, i, replicate_var, domains));
  renormalized.emplace_back(std::vector<VariableId>{replicate_var},
                            std::vector<double>(rank1.r));
  renormalized.emplace_back(std::vector<VariableId>{i},
                            std::vector<double>(rank1.r));
  return {std::move(renormalized), std::move(pair)};
}

MbrResult mbr_partition_function(const FactorGraph& g,
                                 const EliminationOrder& o, int ibound) {
  g.validate();
  if (o.order.size() != g.num_variables())
    throw ModelError("elimination order must cover every variable");
  if (ibound < 1) throw ConfigError("ibound must be >= 1");

  MbrResult out;
  RenormalizationTrace& trace = out.trace;
  trace.base_order = o;
  trace.group_counts.assign(o.order.size(), 1);

  // The evolving graph starts as a copy of the input; renormalizations
  // relabel its factors in place and append compensating singletons.
  DomainSpec ext_domains = g.domains;
  std::vector<Factor> graph_factors = g.factors;

  std::vector<WorkingFactor> pool;
  double scalar_log10 = 0.0;
  pool.reserve(g.factors.size());
  for (std::size_t k = 0; k < g.factors.size(); ++k) {
    ScopeRecord rec{g.factors[k].scope, {k}};
    trace.factor_records.push_back(rec);
    if (g.factors[k].scope.empty())
      scalar_log10 += std::log10(g.factors[k].table[0]) + g.factors[k].log_scale;
    else
      pool.push_back({g.factors[k], std::move(rec)});
  }

  auto add_working = [&](Factor f, ScopeRecord rec) {
    trace.factor_records.push_back(rec);
    if (f.scope.empty())
      scalar_log10 += std::log10(f.table[0]) + f.log_scale;
    else
      pool.push_back({std::move(f), std::move(rec)});
  };

  for (std::size_t pos = 0; pos < o.order.size(); ++pos) {
    const VariableId i = o.order[pos];

    std::vector<WorkingFactor> bucket;
    {
      std::vector<WorkingFactor> rest;
      rest.reserve(pool.size());
      for (WorkingFactor& wf : pool) {
        if (wf.f.contains(i))
          bucket.push_back(std::move(wf));
        else
          rest.push_back(std::move(wf));
      }
      pool = std::move(rest);
    }

    if (bucket.empty()) {
      // unreferenced variable: summing the implicit uniform factor
      scalar_log10 += std::log10(g.domains.cardinality(i));
      trace.renorm_order.order.push_back(i);
      continue;
    }

    std::vector<Factor> member_factors;
    member_factors.reserve(bucket.size());
    for (const WorkingFactor& wf : bucket) member_factors.push_back(wf.f);
    const auto groups =
        partition_bucket_indices(i, member_factors, ibound, ext_domains);
    const std::size_t m = groups.size();
    trace.group_counts[pos] = static_cast<int>(m);

    std::vector<std::size_t> base_singletons;  // graph indices of r_i^l
    for (std::size_t gi = 0; gi + 1 < m; ++gi) {
      const VariableId rep_var =
          static_cast<VariableId>(ext_domains.cardinalities.size());
      ext_domains.cardinalities.push_back(g.domains.cardinality(i));

      std::vector<Factor> members;
      members.reserve(groups[gi].size());
      for (std::size_t k : groups[gi]) members.push_back(bucket[k].f);
      auto [renormalized, pair] = compensate_minibucket(
          members, i, rep_var, static_cast<int>(gi) + 1, ext_domains);

      // graph side: relabel every underlying factor that still mentions i
      std::vector<std::size_t> refs;
      std::vector<VariableId> verts;
      for (std::size_t k : groups[gi]) {
        for (std::size_t r : bucket[k].rec.graph_factors) refs.push_back(r);
        verts = sorted_union(verts, bucket[k].rec.vertices);
      }
      std::sort(refs.begin(), refs.end());
      for (std::size_t r : refs)
        graph_factors[r] =
            rename_variable(graph_factors[r], i, rep_var, ext_domains);
      verts.erase(std::remove(verts.begin(), verts.end(), i), verts.end());
      verts.push_back(rep_var);  // ids grow, so push keeps it sorted

      const std::size_t rep_singleton_idx = graph_factors.size();
      graph_factors.emplace_back(std::vector<VariableId>{rep_var},
                                 std::vector<double>(pair.values));
      const std::size_t base_singleton_idx = graph_factors.size();
      graph_factors.emplace_back(std::vector<VariableId>{i},
                                 std::vector<double>(pair.values));
      base_singletons.push_back(base_singleton_idx);

      TraceStep step;
      step.replicate = ReplicateId{i, static_cast<int>(gi) + 1};
      step.replicate_var = rep_var;
      step.compensation = pair;
      step.base_singleton = base_singleton_idx;
      step.replicate_singleton = rep_singleton_idx;
      step.renormalized_group.vertices = verts;
      step.renormalized_group.graph_factors = refs;

      // working side: sum the relabeled group (with the replicate-side
      // singleton, without the base-side one) over the replicate
      std::vector<Factor> to_multiply(renormalized.begin(),
                                      renormalized.end() - 1);
      Factor prod = factor_product(to_multiply, ext_domains);
      Factor summed =
          factor_marginalize(prod, rep_var, MarginalMode::Sum, ext_domains);

      ScopeRecord rec;
      rec.vertices = verts;
      rec.graph_factors = refs;
      rec.graph_factors.push_back(rep_singleton_idx);
      step.new_factor = rec;
      trace.steps.push_back(std::move(step));
      trace.renorm_order.order.push_back(rep_var);

      add_working(std::move(summed), std::move(rec));
    }

    // last group keeps the original variable and absorbs the base-side
    // singletons of every replicate of this bucket
    {
      const auto& grp = groups[m - 1];
      std::vector<Factor> members;
      members.reserve(grp.size() + base_singletons.size());
      std::vector<std::size_t> refs;
      std::vector<VariableId> verts;
      for (std::size_t k : grp) {
        members.push_back(bucket[k].f);
        for (std::size_t r : bucket[k].rec.graph_factors) refs.push_back(r);
        verts = sorted_union(verts, bucket[k].rec.vertices);
      }
      for (std::size_t r : base_singletons) {
        members.push_back(graph_factors[r]);
        refs.push_back(r);
      }
      std::sort(refs.begin(), refs.end());

      Factor prod = factor_product(members, ext_domains);
      Factor summed =
          factor_marginalize(prod, i, MarginalMode::Sum, ext_domains);

      ScopeRecord rec;
      rec.vertices = verts;  // includes i: the record covers summed vertices
      rec.graph_factors = refs;
      trace.renorm_order.order.push_back(i);
      add_working(std::move(summed), std::move(rec));
    }
  }

  if (!pool.empty())
    throw ModelError("internal: factors left after eliminating every variable");

  out.log_z = LogPartition{scalar_log10};
  trace.final_graph.domains = std::move(ext_domains);
  trace.final_graph.factors = std::move(graph_factors);
  return out;
}

LogPartition verify_trace(const RenormalizationTrace& trace, int width_cap) {
  return bucket_elimination(trace.final_graph, trace.renorm_order, width_cap);
}

}  // namespace bucketforge
