#include "bucketforge/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bucketforge/errors.hpp"

namespace bucketforge {

namespace {

void check_permutation(const FactorGraph& g, std::span<const VariableId> o) {
  if (o.size() != g.num_variables())
    throw ModelError("elimination order must cover every variable");
  std::vector<bool> seen(g.num_variables(), false);
  for (VariableId v : o) {
    if (v < 0 || static_cast<std::size_t>(v) >= seen.size() || seen[v])
      throw ModelError("elimination order is not a permutation");
    seen[v] = true;
  }
}

// Working set of factors during an elimination pass. Empty-scope factors
// fold into a running log10 scalar; log10(0) = -inf propagates zero-mass
// models without special cases.
struct Pool {
  const DomainSpec& domains;
  std::vector<Factor> factors;
  double scalar_log10 = 0.0;

  explicit Pool(const FactorGraph& g) : domains(g.domains) {
    factors.reserve(g.factors.size());
    for (const Factor& f : g.factors) add(f);
  }

  void add(Factor f) {
    if (f.scope.empty())
      scalar_log10 += std::log10(f.table[0]) + f.log_scale;
    else
      factors.push_back(std::move(f));
  }

  // Remove and return all factors containing i, preserving relative order.
  std::vector<Factor> extract_bucket(VariableId i) {
    std::vector<Factor> bucket;
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    for (Factor& f : factors) {
      if (f.contains(i))
        bucket.push_back(std::move(f));
      else
        rest.push_back(std::move(f));
    }
    factors = std::move(rest);
    return bucket;
  }
};

// Max bucket size of a symbolic pass along o, with variables outside o
// (kept ones) riding along inside bucket scopes.
int symbolic_width(const FactorGraph& g, std::span<const VariableId> o) {
  std::vector<std::vector<VariableId>> scopes;
  for (const Factor& f : g.factors)
    if (!f.scope.empty()) scopes.push_back(f.scope);
  int width = 0;
  for (VariableId i : o) {
    std::vector<VariableId> bucket_scope{i};
    std::vector<std::vector<VariableId>> rest;
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
    bucket_scope.erase(std::find(bucket_scope.begin(), bucket_scope.end(), i));
    if (!bucket_scope.empty()) rest.push_back(std::move(bucket_scope));
    scopes = std::move(rest);
  }
  return width;
}

void check_width_cap(int width, int width_cap) {
  if (width > width_cap)
    throw WidthCapError("model too wide: induced width " +
                        std::to_string(width) + " exceeds cap " +
                        std::to_string(width_cap));
}

}  // namespace

LogPartition bucket_elimination(const FactorGraph& g,
                                const EliminationOrder& o, int width_cap) {
  g.validate();
  check_permutation(g, o.order);
  check_width_cap(symbolic_width(g, o.order), width_cap);

  Pool pool(g);
  for (VariableId i : o.order) {
    std::vector<Factor> bucket = pool.extract_bucket(i);
    if (bucket.empty()) {
      // variable referenced by nothing still contributes its domain size
      pool.scalar_log10 += std::log10(g.domains.cardinality(i));
      continue;
    }
    Factor prod = factor_product(bucket, g.domains);
    pool.add(factor_marginalize(prod, i, MarginalMode::Sum, g.domains));
  }
  return LogPartition{pool.scalar_log10};
}

Factor marginalize_subset(const FactorGraph& g,
                          const std::vector<VariableId>& keep,
                          const EliminationOrder& o_rest, int width_cap) {
  g.validate();
  std::vector<bool> kept(g.num_variables(), false);
  for (VariableId v : keep) {
    g.domains.cardinality(v);
    if (kept[v]) throw ModelError("duplicate variable in keep set");
    kept[v] = true;
  }
  std::vector<bool> seen = kept;
  for (VariableId v : o_rest.order) {
    g.domains.cardinality(v);
    if (kept[v])
      throw ModelError("keep set and elimination order overlap");
    if (seen[v]) throw ModelError("duplicate variable in elimination order");
    seen[v] = true;
  }
  if (keep.size() + o_rest.order.size() != g.num_variables())
    throw ModelError("keep set and elimination order must cover all variables");
  check_width_cap(symbolic_width(g, o_rest.order), width_cap);

  Pool pool(g);
  for (VariableId i : o_rest.order) {
    std::vector<Factor> bucket = pool.extract_bucket(i);
    if (bucket.empty()) {
      pool.scalar_log10 += std::log10(g.domains.cardinality(i));
      continue;
    }
    Factor prod = factor_product(bucket, g.domains);
    pool.add(factor_marginalize(prod, i, MarginalMode::Sum, g.domains));
  }

  Factor result = factor_product(pool.factors, g.domains);
  if (pool.scalar_log10 == -std::numeric_limits<double>::infinity()) {
    std::fill(result.table.begin(), result.table.end(), 0.0);
    result.log_scale = 0.0;
  } else {
    result.log_scale += pool.scalar_log10;
  }
  return result;
}

std::vector<std::vector<std::size_t>> partition_bucket_indices(
    VariableId variable, std::span<const Factor> members, int ibound,
    const DomainSpec& domains) {
  if (ibound < 1) throw ConfigError("ibound must be >= 1");
  if (members.empty()) throw ModelError("cannot partition an empty bucket");
  const std::size_t cap = static_cast<std::size_t>(ibound) + 1;
  for (const Factor& f : members) {
    if (!f.contains(variable))
      throw ModelError("bucket member does not contain the bucket variable");
    if (f.scope.size() > cap)
      throw ModelError("factor scope of size " +
                       std::to_string(f.scope.size()) +
                       " cannot satisfy ibound " + std::to_string(ibound));
  }

  std::vector<std::size_t> order(members.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (members[a].scope.size() != members[b].scope.size())
                       return members[a].scope.size() > members[b].scope.size();
                     return members[a].scope < members[b].scope;
                   });

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::vector<VariableId>> group_scopes;
  for (std::size_t k : order) {
    const auto& scope = members[k].scope;
    bool placed = false;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      std::vector<VariableId> merged;
      std::set_union(group_scopes[gi].begin(), group_scopes[gi].end(),
                     scope.begin(), scope.end(), std::back_inserter(merged));
      if (merged.size() <= cap) {
        groups[gi].push_back(k);
        group_scopes[gi] = std::move(merged);
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.push_back({k});
      group_scopes.push_back(scope);
    }
  }
  return groups;
}

MiniBucketPartition partition_bucket(const Bucket& b, int ibound,
                                     const DomainSpec& domains) {
  auto idx = partition_bucket_indices(b.variable, b.members, ibound, domains);
  MiniBucketPartition out;
  out.variable = b.variable;
  out.ibound = ibound;
  out.groups.reserve(idx.size());
  for (const auto& grp : idx) {
    std::vector<Factor> fs;
    fs.reserve(grp.size());
    for (std::size_t k : grp) fs.push_back(b.members[k]);
    out.groups.push_back(std::move(fs));
  }
  return out;
}

LogPartition mini_bucket_elimination(const FactorGraph& g,
                                     const EliminationOrder& o, int ibound,
                                     BoundMode mode) {
  g.validate();
  check_permutation(g, o.order);

  Pool pool(g);
  for (VariableId i : o.order) {
    std::vector<Factor> bucket = pool.extract_bucket(i);
    if (bucket.empty()) {
      pool.scalar_log10 += std::log10(g.domains.cardinality(i));
      continue;
    }
    auto groups = partition_bucket_indices(i, bucket, ibound, g.domains);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      std::vector<Factor> fs;
      fs.reserve(groups[gi].size());
      for (std::size_t k : groups[gi]) fs.push_back(std::move(bucket[k]));
      Factor prod = factor_product(fs, g.domains);
      const bool last = gi + 1 == groups.size();
      MarginalMode mm = last ? MarginalMode::Sum
                             : (mode == BoundMode::Upper ? MarginalMode::Max
                                                         : MarginalMode::Min);
      pool.add(factor_marginalize(prod, i, mm, g.domains));
    }
  }
  return LogPartition{pool.scalar_log10};
}

}  // namespace bucketforge
