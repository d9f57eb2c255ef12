#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bucketforge/lowrank.hpp"

namespace bucketforge {

using VariableId = std::int32_t;

// Per-variable cardinalities d_i, indexed by VariableId.
struct DomainSpec {
  std::vector<std::int32_t> cardinalities;

  std::size_t num_variables() const { return cardinalities.size(); }
  std::int32_t cardinality(VariableId v) const;
  void validate() const;
};

enum class MarginalMode { Sum, Max, Min };

// Dense non-negative table over a sorted variable scope.
//
// The table is row-major over the scope (first scope variable has the
// largest stride) and every entry is implicitly multiplied by
// 10^log_scale. Products and marginalizations rescale the table so its
// maximum entry is 1, folding the magnitude into log_scale; this keeps
// strongly coupled models inside double range without changing any
// algorithm output, since all downstream projections are
// scale-equivariant.
struct Factor {
  std::vector<VariableId> scope;  // sorted ascending, no duplicates
  std::vector<double> table;      // length = product of scope cardinalities
  double log_scale = 0.0;         // base-10 exponent on every entry

  Factor() : table{1.0} {}
  Factor(std::vector<VariableId> scope_in, std::vector<double> table_in,
         double log_scale_in = 0.0);

  static Factor scalar(double value, double log_scale_in = 0.0);

  bool contains(VariableId v) const;
  std::size_t size() const { return table.size(); }
  // Entry value with log_scale applied.
  double linear(std::size_t idx) const;
};

// Hypergraph plus factor set; edges are the factor scopes.
struct FactorGraph {
  DomainSpec domains;
  std::vector<Factor> factors;

  std::size_t num_variables() const { return domains.num_variables(); }
  void validate() const;
};

void validate_factor(const Factor& f, const DomainSpec& domains);

// Row-major strides of a sorted scope: strides[k] = prod of cardinalities
// of scope[k+1..].
std::vector<std::size_t> scope_strides(std::span<const VariableId> scope,
                                       const DomainSpec& domains);

std::size_t scope_table_size(std::span<const VariableId> scope,
                             const DomainSpec& domains);

// Pointwise product over the sorted union of the input scopes. An empty
// input list yields the scalar factor 1.
Factor factor_product(std::span<const Factor> factors,
                      const DomainSpec& domains);

// Sum/max/min out variable i; the returned scope is scope(f) minus i.
Factor factor_marginalize(const Factor& f, VariableId i, MarginalMode mode,
                          const DomainSpec& domains);

// Reshape f's table into a d_i x (size/d_i) matrix whose row index is x_i
// and whose column index is the row-major index of the remaining scope
// variables. Pure reshape of the stored table; log_scale is not applied.
Matrix factor_matricize(const Factor& f, VariableId i,
                        const DomainSpec& domains);

// Relabel one scope variable; the table is permuted so the result is again
// row-major over its sorted scope. Both variables must have equal
// cardinality.
Factor rename_variable(const Factor& f, VariableId from, VariableId to,
                       const DomainSpec& domains);

}  // namespace bucketforge
